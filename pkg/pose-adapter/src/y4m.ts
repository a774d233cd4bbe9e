import { UnreadableVideo } from './errors.js';
import type { DecodedVideo, VideoFrame } from './types.js';

const MAGIC = 'YUV4MPEG2';
const NL = 0x0a;

function chromaBytes(colorspace: string, width: number, height: number): number {
  if (colorspace.startsWith('C420')) {
    return 2 * (Math.ceil(width / 2) * Math.ceil(height / 2));
  }
  if (colorspace.startsWith('C422')) {
    return 2 * (Math.ceil(width / 2) * height);
  }
  if (colorspace.startsWith('C444')) {
    return 2 * (width * height);
  }
  if (colorspace === 'Cmono') {
    return 0;
  }
  throw new UnreadableVideo(`unsupported colorspace ${colorspace}`);
}

function readLine(data: Uint8Array, offset: number): { line: string; next: number } {
  const end = data.indexOf(NL, offset);
  if (end < 0) {
    throw new UnreadableVideo('missing newline in stream header');
  }
  return {
    line: Buffer.from(data.subarray(offset, end)).toString('ascii'),
    next: end + 1,
  };
}

/** Decode a YUV4MPEG2 (.y4m) byte buffer; only luma planes are retained.
 *
 * Any video can be converted to this container losslessly with
 * ``ffmpeg -i input.mp4 -pix_fmt yuv420p output.y4m``.
 */
export function decodeY4M(data: Uint8Array): DecodedVideo {
  const header = readLine(data, 0);
  const tokens = header.line.split(' ').filter((t) => t.length > 0);
  if (tokens[0] !== MAGIC) {
    throw new UnreadableVideo('not a YUV4MPEG2 stream');
  }

  let width = 0;
  let height = 0;
  let fps = 0;
  let colorspace = 'C420';
  for (const token of tokens.slice(1)) {
    const tag = token[0];
    const value = token.slice(1);
    if (tag === 'W') width = Number(value);
    else if (tag === 'H') height = Number(value);
    else if (tag === 'F') {
      const [num, den] = value.split(':').map(Number);
      if (num > 0 && den > 0) fps = num / den;
    } else if (tag === 'C') colorspace = token;
  }
  if (!Number.isInteger(width) || !Number.isInteger(height) || width <= 0 || height <= 0) {
    throw new UnreadableVideo(`bad frame geometry ${width}x${height}`);
  }

  const lumaBytes = width * height;
  const frameBytes = lumaBytes + chromaBytes(colorspace, width, height);
  const frames: VideoFrame[] = [];
  let offset = header.next;
  while (offset < data.length) {
    const marker = readLine(data, offset);
    if (!marker.line.startsWith('FRAME')) {
      throw new UnreadableVideo(`expected FRAME marker at byte ${offset}`);
    }
    offset = marker.next;
    if (offset + frameBytes > data.length) {
      throw new UnreadableVideo(`truncated frame ${frames.length}`);
    }
    frames.push({
      index: frames.length,
      width,
      height,
      luma: data.subarray(offset, offset + lumaBytes),
    });
    offset += frameBytes;
  }
  return { width, height, fps: fps || 30, frames };
}

export interface EncodeOptions {
  width: number;
  height: number;
  fps?: number;
}

/** Encode luma-only frames as a Cmono y4m buffer (used by tests/demos). */
export function encodeY4M(lumaFrames: Uint8Array[], options: EncodeOptions): Uint8Array {
  const { width, height } = options;
  const fps = options.fps ?? 30;
  const head = Buffer.from(`${MAGIC} W${width} H${height} F${fps}:1 Ip A1:1 Cmono\n`, 'ascii');
  const marker = Buffer.from('FRAME\n', 'ascii');
  const parts: Buffer[] = [head];
  for (const luma of lumaFrames) {
    if (luma.length !== width * height) {
      throw new UnreadableVideo('luma plane does not match geometry');
    }
    parts.push(marker, Buffer.from(luma));
  }
  return Uint8Array.from(Buffer.concat(parts));
}
