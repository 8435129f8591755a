/** Fixed qualitative palette; curves take colors in creation order. */
export const PALETTE = [
  "#1f77b4",
  "#ff7f0e",
  "#2ca02c",
  "#d62728",
  "#9467bd",
  "#8c564b",
  "#e377c2",
  "#7f7f7f",
  "#bcbd22",
  "#17becf",
  "#aec7e8",
  "#ffbb78",
];

export function colorFor(creationIndex: number): string {
  return PALETTE[creationIndex % PALETTE.length];
}
