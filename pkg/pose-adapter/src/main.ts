#!/usr/bin/env node
import { realpathSync } from 'node:fs';
import { fileURLToPath } from 'node:url';

import { extractKeypoints } from './adapter.js';
import { EstimatorUnavailable, UnreadableVideo } from './errors.js';
import { defaultMediapipeMapping, makeMapping } from './mapping.js';
import { MarkerEstimator } from './marker.js';
import { createMediapipeEstimator } from './mediapipe.js';
import type { PoseEstimator } from './types.js';

const USAGE = `usage: pose-adapter <video.y4m> [options]

Convert a video into the actionseg frame JSONL format.

options:
  --out PATH             output JSONL path (default: frames.jsonl)
  --min-visibility N     detection visibility floor in [0, 1] (default: 0.5)
  --estimator NAME       mediapipe | marker (default: mediapipe)
  --model PATH           pose landmarker .task file (mediapipe)
  --wasm PATH            tasks-vision wasm directory (mediapipe)
`;

interface CliArgs {
  video: string;
  out: string;
  minVisibility: number;
  estimator: string;
  model: string;
  wasm: string;
}

function parseArgs(argv: string[]): CliArgs {
  const args: CliArgs = {
    video: '',
    out: 'frames.jsonl',
    minVisibility: 0.5,
    estimator: 'mediapipe',
    model: 'pose_landmarker.task',
    wasm: 'wasm',
  };
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    const next = () => {
      i += 1;
      if (i >= argv.length) throw new Error(`${arg} expects a value`);
      return argv[i];
    };
    if (arg === '--out') args.out = next();
    else if (arg === '--min-visibility') {
      args.minVisibility = Number(next());
      if (!(args.minVisibility >= 0 && args.minVisibility <= 1)) {
        throw new Error('--min-visibility expects a number in [0, 1]');
      }
    } else if (arg === '--estimator') args.estimator = next();
    else if (arg === '--model') args.model = next();
    else if (arg === '--wasm') args.wasm = next();
    else if (arg === '--help' || arg === '-h') {
      process.stdout.write(USAGE);
      process.exit(0);
    } else if (arg.startsWith('--')) throw new Error(`unknown option ${arg}`);
    else if (!args.video) args.video = arg;
    else throw new Error(`unexpected argument ${arg}`);
  }
  if (!args.video) throw new Error('missing video path');
  return args;
}

async function buildEstimator(args: CliArgs): Promise<PoseEstimator> {
  if (args.estimator === 'marker') {
    return new MarkerEstimator();
  }
  if (args.estimator === 'mediapipe') {
    return createMediapipeEstimator({ modelPath: args.model, wasmPath: args.wasm });
  }
  throw new Error(`unknown estimator ${args.estimator}`);
}

export async function run(argv: string[]): Promise<number> {
  let args: CliArgs;
  try {
    args = parseArgs(argv);
  } catch (err) {
    process.stderr.write(`pose-adapter: ${(err as Error).message}\n${USAGE}`);
    return 1;
  }
  try {
    const estimator = await buildEstimator(args);
    const mapping = defaultMediapipeMapping(args.minVisibility);
    const lines = await extractKeypoints(args.video, args.out, { estimator, mapping });
    process.stderr.write(`pose-adapter: wrote ${lines} frames to ${args.out}\n`);
    return 0;
  } catch (err) {
    if (err instanceof UnreadableVideo || err instanceof EstimatorUnavailable) {
      process.stderr.write(`pose-adapter: ${err.name}: ${err.message}\n`);
      return 1;
    }
    throw err;
  }
}

function invokedDirectly(): boolean {
  if (!process.argv[1]) return false;
  try {
    const entry = realpathSync(process.argv[1]);
    return fileURLToPath(import.meta.url) === entry;
  } catch {
    return false;
  }
}

if (invokedDirectly()) {
  run(process.argv.slice(2)).then((code) => {
    process.exitCode = code;
  });
}

export { makeMapping };
