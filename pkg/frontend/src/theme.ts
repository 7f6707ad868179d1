/** Central colors and layout constants.
 *
 * The agreement ramp and the annotator palette are both colorblind-safe;
 * heatmap reading is the core task, so the ramp is monotone in lightness.
 */

/** Stops of a dark-blue to yellow ramp (viridis-like), as [r, g, b]. */
const AGREEMENT_STOPS: [number, number, number][] = [
  [68, 1, 84],
  [59, 82, 139],
  [33, 145, 140],
  [94, 201, 98],
  [253, 231, 37],
];

function mix(a: number, b: number, t: number): number {
  return Math.round(a + (b - a) * t);
}

/** Linear map of an agreement value in [0, 1] to a CSS color. */
export function agreementColor(value: number): string {
  const v = Math.min(1, Math.max(0, value));
  const scaled = v * (AGREEMENT_STOPS.length - 1);
  const low = Math.min(AGREEMENT_STOPS.length - 2, Math.floor(scaled));
  const t = scaled - low;
  const [r1, g1, b1] = AGREEMENT_STOPS[low];
  const [r2, g2, b2] = AGREEMENT_STOPS[low + 1];
  return `rgb(${mix(r1, r2, t)}, ${mix(g1, g2, t)}, ${mix(b1, b2, t)})`;
}

/** Okabe-Ito palette, one color per annotator layer. */
const ANNOTATOR_PALETTE = [
  "#0072b2",
  "#e69f00",
  "#009e73",
  "#cc79a7",
  "#56b4e9",
  "#d55e00",
  "#f0e442",
];

export function annotatorColor(index: number): string {
  return ANNOTATOR_PALETTE[index % ANNOTATOR_PALETTE.length];
}

/** CSS classes for graph-diff edge states; the SVG renderer applies them. */
export const DIFF_EDGE_CLASS = {
  missing: "edge-missing",
  extra: "edge-extra",
  uncertain: "edge-uncertain",
} as const;

export const SMALL_MULTIPLE_SIZE = 160;
export const HISTOGRAM_BAR_UNIT = 14;
