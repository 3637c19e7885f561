// Canvas painting for decoded frames.  Kept to one DOM-typed function so
// everything upstream of the context stays unit-testable in plain node.

import { toRgba } from "./palette.js";
import { FRAME_HEIGHT, FRAME_WIDTH } from "./protocol.js";

export function paintFrame(
  ctx: CanvasRenderingContext2D,
  pixels: Uint8Array,
): void {
  const image = new ImageData(toRgba(pixels), FRAME_WIDTH, FRAME_HEIGHT);
  ctx.putImageData(image, 0, 0);
}
