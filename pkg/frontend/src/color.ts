// Diverging sentiment scale: -1 red, 0 neutral gray, +1 green.

const NEG = [211, 47, 47]; // red
const MID = [117, 117, 117]; // neutral gray
const POS = [46, 125, 50]; // green

function mix(a: number[], b: number[], t: number): number[] {
  return a.map((av, i) => Math.round(av + (b[i] - av) * t));
}

export function sentimentColor(value: number): string {
  const v = Math.max(-1, Math.min(1, value));
  const rgb = v < 0 ? mix(MID, NEG, -v) : mix(MID, POS, v);
  return `rgb(${rgb[0]}, ${rgb[1]}, ${rgb[2]})`;
}
