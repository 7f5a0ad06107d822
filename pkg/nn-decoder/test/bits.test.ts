import { describe, expect, it } from 'vitest';
import { isBitString, thresholdBits } from '../src/bits';

describe('thresholdBits', () => {
  it('maps the exact 0.5 boundary to 1', () => {
    expect(thresholdBits([0.5])).toBe('1');
  });

  it('maps just below the boundary to 0', () => {
    expect(thresholdBits([0.4999999])).toBe('0');
  });

  it('thresholds elementwise', () => {
    expect(thresholdBits([0, 0.2, 0.5, 0.8, 1])).toBe('00111');
  });
});

describe('isBitString', () => {
  it('accepts 0/1 strings of the right width', () => {
    expect(isBitString('0101', 4)).toBe(true);
  });

  it('rejects wrong width', () => {
    expect(isBitString('0101', 5)).toBe(false);
  });

  it('rejects non-bit characters', () => {
    expect(isBitString('01a1', 4)).toBe(false);
    expect(isBitString('01 1', 4)).toBe(false);
  });
});
