import { EstimatorUnavailable } from './errors.js';
import type { Landmark, PoseEstimator, VideoFrame } from './types.js';

export interface MediapipeOptions {
  /** Path to a pose landmarker .task model file. */
  modelPath: string;
  /** Directory holding the tasks-vision wasm assets. */
  wasmPath: string;
}

function lumaToImageData(frame: VideoFrame): {
  data: Uint8ClampedArray;
  width: number;
  height: number;
} {
  const rgba = new Uint8ClampedArray(frame.width * frame.height * 4);
  for (let i = 0; i < frame.luma.length; i++) {
    const v = frame.luma[i];
    rgba[4 * i] = v;
    rgba[4 * i + 1] = v;
    rgba[4 * i + 2] = v;
    rgba[4 * i + 3] = 255;
  }
  return { data: rgba, width: frame.width, height: frame.height };
}

/**
 * Wrapper around the @mediapipe/tasks-vision pose landmarker. The
 * package, its wasm bundle and the .task model are deployment assets;
 * when any of them cannot be loaded this throws EstimatorUnavailable so
 * callers can fall back or abort cleanly.
 */
export async function createMediapipeEstimator(
  options: MediapipeOptions,
): Promise<PoseEstimator> {
  const moduleName = '@mediapipe/tasks-vision';
  let landmarker: {
    detectForVideo(image: unknown, ts: number): { landmarks: Landmark[][] };
  };
  try {
    const vision = await import(moduleName);
    const fileset = await vision.FilesetResolver.forVisionTasks(options.wasmPath);
    landmarker = await vision.PoseLandmarker.createFromOptions(fileset, {
      baseOptions: { modelAssetPath: options.modelPath, delegate: 'CPU' },
      runningMode: 'VIDEO',
      numPoses: 1,
    });
  } catch (err) {
    throw new EstimatorUnavailable(
      `pose landmarker could not be loaded: ${(err as Error).message}`,
    );
  }

  return {
    estimate(frame: VideoFrame): Landmark[] | null {
      const image = lumaToImageData(frame);
      const result = landmarker.detectForVideo(image, frame.index);
      const pose = result.landmarks?.[0];
      if (!pose || pose.length === 0) {
        return null;
      }
      return pose.map((lm) => ({
        x: lm.x,
        y: lm.y,
        visibility: lm.visibility ?? 1,
      }));
    },
  };
}
