// The simulator's 3-bit color space: bit 2 = red, bit 1 = green,
// bit 0 = blue, each at full intensity.

export function paletteRgb(code: number): [number, number, number] {
  return [code & 4 ? 255 : 0, code & 2 ? 255 : 0, code & 1 ? 255 : 0];
}

/** Expand palette codes to RGBA bytes ready for an ImageData buffer. */
export function toRgba(pixels: Uint8Array): Uint8ClampedArray<ArrayBuffer> {
  const out = new Uint8ClampedArray(pixels.length * 4);
  for (let i = 0, o = 0; i < pixels.length; i++, o += 4) {
    const code = pixels[i];
    out[o] = code & 4 ? 255 : 0;
    out[o + 1] = code & 2 ? 255 : 0;
    out[o + 2] = code & 1 ? 255 : 0;
    out[o + 3] = 255;
  }
  return out;
}

/** FNV-1a 32-bit hash, hex encoded; used to fingerprint painted frames. */
export function fnv1aHex(bytes: ArrayLike<number>): string {
  let h = 0x811c9dc5;
  for (let i = 0; i < bytes.length; i++) {
    h ^= bytes[i];
    h = Math.imul(h, 0x01000193) >>> 0;
  }
  return h.toString(16).padStart(8, "0");
}
