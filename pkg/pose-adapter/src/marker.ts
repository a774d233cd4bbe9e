import type { Landmark, PoseEstimator, VideoFrame } from './types.js';

/** Fixed BlazePose-style landmark layout for a subject standing at the
 * frame center; only the left wrist is tracked from pixels. Normalized
 * [0, 1] coordinates, y growing downward. */
const BASE_POSE: ReadonlyArray<readonly [number, number]> = (() => {
  const pose: [number, number][] = [];
  for (let i = 0; i < 33; i++) pose.push([0.5, 0.2]); // head cluster default
  pose[11] = [0.42, 0.35]; // left shoulder
  pose[12] = [0.58, 0.35]; // right shoulder
  pose[13] = [0.4, 0.47]; // left elbow
  pose[14] = [0.6, 0.47]; // right elbow
  pose[15] = [0.38, 0.58]; // left wrist (replaced by the tracked marker)
  pose[16] = [0.62, 0.58]; // right wrist
  pose[23] = [0.45, 0.6]; // left hip
  pose[24] = [0.55, 0.6]; // right hip
  pose[25] = [0.45, 0.78]; // left knee
  pose[26] = [0.55, 0.78]; // right knee
  pose[27] = [0.45, 0.95]; // left ankle
  pose[28] = [0.55, 0.95]; // right ankle
  return pose;
})();

export interface MarkerEstimatorOptions {
  /** Luma value a pixel must exceed to count as marker. */
  lumaThreshold?: number;
  /** Minimum bright-pixel count for a detection. */
  minPixels?: number;
}

/**
 * Deterministic estimator for marker videos: finds the centroid of the
 * bright blob in the luma plane and drives the left wrist with it, the
 * rest of the skeleton staying at the standing base pose. Frames with
 * no blob yield no detection. Useful for exercising the full adapter
 * path on real video bytes without a learned model.
 */
export class MarkerEstimator implements PoseEstimator {
  private readonly lumaThreshold: number;
  private readonly minPixels: number;

  constructor(options: MarkerEstimatorOptions = {}) {
    this.lumaThreshold = options.lumaThreshold ?? 200;
    this.minPixels = options.minPixels ?? 4;
  }

  estimate(frame: VideoFrame): Landmark[] | null {
    const { luma, width, height } = frame;
    let count = 0;
    let sumX = 0;
    let sumY = 0;
    for (let i = 0; i < luma.length; i++) {
      if (luma[i] > this.lumaThreshold) {
        count += 1;
        sumX += i % width;
        sumY += (i / width) | 0;
      }
    }
    if (count < this.minPixels) {
      return null;
    }
    const markerX = sumX / count / width;
    const markerY = sumY / count / height;
    const visibility = Math.min(1, count / (4 * this.minPixels));
    return BASE_POSE.map(([x, y], index) => {
      if (index === 15) {
        return { x: markerX, y: markerY, visibility };
      }
      return { x, y, visibility: 0.9 };
    });
  }
}
