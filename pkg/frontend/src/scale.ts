/** Linear data<->pixel mapping used by axes and brushes. */

export class LinearScale {
  constructor(
    readonly d0: number,
    readonly d1: number,
    readonly r0: number,
    readonly r1: number,
  ) {}

  apply(value: number): number {
    return this.r0 + ((value - this.d0) / (this.d1 - this.d0)) * (this.r1 - this.r0);
  }

  invert(pixel: number): number {
    return this.d0 + ((pixel - this.r0) / (this.r1 - this.r0)) * (this.d1 - this.d0);
  }

  clampData(value: number): number {
    const lo = Math.min(this.d0, this.d1);
    const hi = Math.max(this.d0, this.d1);
    return Math.min(hi, Math.max(lo, value));
  }

  /** Data width covered by a single pixel; the tolerance for brush mapping. */
  pixelDataWidth(): number {
    return Math.abs(this.invert(this.r0 + 1) - this.invert(this.r0));
  }
}

/** Pixel extent -> ordered, domain-clamped data interval. */
export function brushInterval(
  scale: LinearScale,
  pxA: number,
  pxB: number,
): [number, number] {
  const a = scale.clampData(scale.invert(pxA));
  const b = scale.clampData(scale.invert(pxB));
  return a <= b ? [a, b] : [b, a];
}
