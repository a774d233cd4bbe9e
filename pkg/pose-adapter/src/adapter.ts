import { readFile, writeFile } from 'node:fs/promises';

import { UnreadableVideo } from './errors.js';
import { ENGINE_KEYPOINTS, type LandmarkMapping } from './mapping.js';
import type { FrameRecord, PoseEstimator, VideoFrame } from './types.js';
import { decodeY4M } from './y4m.js';

/** Map one landmark set onto engine keypoint order. */
function toKeypoints(
  landmarks: { x: number; y: number; visibility: number }[],
  mapping: LandmarkMapping,
): { kp: [number, number][]; conf: number[] } | null {
  const kp: [number, number][] = new Array(ENGINE_KEYPOINTS.length);
  const conf: number[] = new Array(ENGINE_KEYPOINTS.length);
  let best = 0;
  for (const [estimatorIdx, engineIdx] of mapping.pairs) {
    const lm = landmarks[estimatorIdx];
    if (!lm) {
      return null; // estimator emitted fewer landmarks than the mapping expects
    }
    kp[engineIdx] = [lm.x, lm.y];
    conf[engineIdx] = Math.max(0, Math.min(1, lm.visibility));
    best = Math.max(best, lm.visibility);
  }
  if (best < mapping.minVisibility) {
    return null; // nothing trustworthy in this frame
  }
  return { kp, conf };
}

/**
 * Turn decoded frames into JSONL records, one per frame with t starting
 * at 0. Frames without a usable detection repeat the previous frame's
 * keypoints with all confidences zeroed; leading detection-less frames
 * emit zeroed keypoints so the line count always equals the frame count.
 */
export function framesToRecords(
  frames: Iterable<VideoFrame>,
  estimator: PoseEstimator,
  mapping: LandmarkMapping,
): FrameRecord[] {
  const records: FrameRecord[] = [];
  const zero: [number, number][] = ENGINE_KEYPOINTS.map(() => [0, 0]);
  let previous: [number, number][] = zero;
  let t = 0;
  for (const frame of frames) {
    const landmarks = estimator.estimate(frame);
    const mapped = landmarks ? toKeypoints(landmarks, mapping) : null;
    if (mapped) {
      records.push({ t, kp: mapped.kp, conf: mapped.conf });
      previous = mapped.kp;
    } else {
      records.push({
        t,
        kp: previous.map(([x, y]) => [x, y] as [number, number]),
        conf: ENGINE_KEYPOINTS.map(() => 0),
      });
    }
    t += 1;
  }
  return records;
}

export function recordsToJsonl(records: FrameRecord[]): string {
  return records.map((r) => JSON.stringify(r)).join('\n') + (records.length ? '\n' : '');
}

export interface ExtractOptions {
  estimator: PoseEstimator;
  mapping: LandmarkMapping;
}

/** video file -> frame JSONL file; returns the number of lines written. */
export async function extractKeypoints(
  videoPath: string,
  outPath: string,
  options: ExtractOptions,
): Promise<number> {
  let bytes: Uint8Array;
  try {
    bytes = await readFile(videoPath);
  } catch (err) {
    throw new UnreadableVideo(`${videoPath}: ${(err as Error).message}`);
  }
  const video = decodeY4M(bytes);
  const records = framesToRecords(video.frames, options.estimator, options.mapping);
  await writeFile(outPath, recordsToJsonl(records), 'utf-8');
  return records.length;
}
