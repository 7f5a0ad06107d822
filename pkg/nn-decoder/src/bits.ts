/** Bit-string helpers shared by dataset parsing, prediction and the server. */

export function isBitString(s: string, width?: number): boolean {
  if (width !== undefined && s.length !== width) return false;
  for (let i = 0; i < s.length; i++) {
    const c = s.charCodeAt(i);
    if (c !== 0x30 && c !== 0x31) return false;
  }
  return s.length > 0 || width === 0;
}

export function bitsToFloats(s: string, out: Float32Array, offset: number): void {
  for (let i = 0; i < s.length; i++) out[offset + i] = s.charCodeAt(i) - 0x30;
}

/** Probabilities to bits at the 0.5 boundary; exact ties map to 1. */
export function thresholdBits(probs: ArrayLike<number>): string {
  let out = '';
  for (let i = 0; i < probs.length; i++) out += probs[i] >= 0.5 ? '1' : '0';
  return out;
}
