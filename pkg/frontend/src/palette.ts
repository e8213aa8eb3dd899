// Fixed 20-color palette for recurring-word highlighting, mapped from the
// server's color_index (0..19). Perceptually distinct on white; keep the
// order stable across releases so visual snapshots stay valid. Version 1.

export const PALETTE: readonly string[] = [
  "#e6194b", // red
  "#3c89d0", // blue
  "#3cb44b", // green
  "#9a6324", // brown
  "#911eb4", // purple
  "#f58231", // orange
  "#008080", // teal
  "#d4af00", // dark yellow
  "#f032e6", // magenta
  "#6a8f00", // olive
  "#568198", // steel
  "#c94c77", // raspberry
  "#7b68ee", // slate violet
  "#2aa198", // cyan-teal
  "#b8651b", // ochre
  "#5d7e3c", // moss
  "#b03060", // maroon
  "#4169e1", // royal blue
  "#8b5a2b", // saddle
  "#597d94", // slate
];

export function colorFor(index: number): string {
  return PALETTE[index % PALETTE.length];
}
