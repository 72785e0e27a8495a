/**
 * Deterministic PRNG so every exported bundle is reproducible from its seed.
 */

/** mulberry32: small, fast, good-enough 32-bit generator. */
export function mulberry32(seed: number): () => number {
  let state = seed >>> 0;
  return () => {
    state = (state + 0x6d2b79f5) >>> 0;
    let t = state;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

/** Standard normal draws via Box-Muller on top of a uniform source. */
export class Rng {
  private uniformSource: () => number;
  private spare: number | null = null;

  constructor(seed: number) {
    this.uniformSource = mulberry32(seed);
  }

  uniform(): number {
    return this.uniformSource();
  }

  normal(): number {
    if (this.spare !== null) {
      const value = this.spare;
      this.spare = null;
      return value;
    }
    let u = 0;
    let v = 0;
    // avoid log(0)
    while (u === 0) u = this.uniformSource();
    v = this.uniformSource();
    const radius = Math.sqrt(-2.0 * Math.log(u));
    this.spare = radius * Math.sin(2.0 * Math.PI * v);
    return radius * Math.cos(2.0 * Math.PI * v);
  }

  normalVector(length: number): number[] {
    return Array.from({ length }, () => this.normal());
  }

  /** Fisher-Yates shuffle of index order, in place. */
  shuffle<T>(items: T[]): T[] {
    for (let i = items.length - 1; i > 0; i--) {
      const j = Math.floor(this.uniformSource() * (i + 1));
      [items[i], items[j]] = [items[j], items[i]];
    }
    return items;
  }
}
