/** Keypoint order expected by the engine's built-in topology. */
export const ENGINE_KEYPOINTS = [
  'l_shoulder',
  'r_shoulder',
  'l_elbow',
  'r_elbow',
  'l_wrist',
  'r_wrist',
  'l_hip',
  'r_hip',
  'l_knee',
  'r_knee',
  'l_ankle',
  'r_ankle',
] as const;

export interface LandmarkMapping {
  /** estimator landmark index -> engine keypoint index (injective). */
  pairs: ReadonlyMap<number, number>;
  /** A frame whose mapped landmarks all fall below this visibility is
   * treated as having no detection. */
  minVisibility: number;
}

/** BlazePose 33-landmark convention mapped onto the engine skeleton. */
export function defaultMediapipeMapping(minVisibility = 0.5): LandmarkMapping {
  return makeMapping(
    [
      [11, 0], // left shoulder
      [12, 1], // right shoulder
      [13, 2], // left elbow
      [14, 3], // right elbow
      [15, 4], // left wrist
      [16, 5], // right wrist
      [23, 6], // left hip
      [24, 7], // right hip
      [25, 8], // left knee
      [26, 9], // right knee
      [27, 10], // left ankle
      [28, 11], // right ankle
    ],
    minVisibility,
  );
}

export function makeMapping(
  pairs: ReadonlyArray<readonly [number, number]>,
  minVisibility = 0.5,
): LandmarkMapping {
  const map = new Map<number, number>();
  const targets = new Set<number>();
  for (const [estimatorIdx, engineIdx] of pairs) {
    if (map.has(estimatorIdx)) {
      throw new Error(`estimator landmark ${estimatorIdx} mapped twice`);
    }
    if (targets.has(engineIdx)) {
      throw new Error(`engine keypoint ${engineIdx} has two sources`);
    }
    map.set(estimatorIdx, engineIdx);
    targets.add(engineIdx);
  }
  for (let i = 0; i < ENGINE_KEYPOINTS.length; i++) {
    if (!targets.has(i)) {
      throw new Error(`engine keypoint ${i} (${ENGINE_KEYPOINTS[i]}) unmapped`);
    }
  }
  if (!(minVisibility >= 0 && minVisibility <= 1)) {
    throw new Error(`minVisibility must lie in [0, 1], got ${minVisibility}`);
  }
  return { pairs: map, minVisibility };
}
