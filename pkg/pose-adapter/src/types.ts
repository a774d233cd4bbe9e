/** One decoded video frame; only the luma plane is kept. */
export interface VideoFrame {
  index: number;
  width: number;
  height: number;
  /** Row-major luma samples, width * height bytes. */
  luma: Uint8Array;
}

export interface DecodedVideo {
  width: number;
  height: number;
  /** Frames per second as reported by the container. */
  fps: number;
  frames: VideoFrame[];
}

/** A single estimated landmark in normalized [0, 1] image coordinates. */
export interface Landmark {
  x: number;
  y: number;
  visibility: number;
}

/** Anything that maps a frame to a landmark set (or nothing). */
export interface PoseEstimator {
  /** Landmark list indexed by the estimator's own convention, or null
   * when no person is detected in the frame. */
  estimate(frame: VideoFrame): Landmark[] | null;
}

/** One output line of the frame JSONL stream. */
export interface FrameRecord {
  t: number;
  kp: [number, number][];
  conf: number[];
}
