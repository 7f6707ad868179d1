/** Splits document text into highlightable segments.
 *
 * Fact anchors are half-open character ranges. Overlaps are common (two
 * facts citing the same clause), so the text is cut at every anchor
 * boundary and each resulting segment lists the facts covering it. The
 * segments tile [0, length) exactly: contiguous, non-empty, in order.
 */

export interface AnchorSpan {
  start: number;
  end: number;
  /** Index of the fact the span belongs to, for hover wiring. */
  fact: number;
}

export interface Segment {
  start: number;
  end: number;
  /** Fact indices whose anchors cover the whole segment. */
  facts: number[];
}

export function segment(length: number, spans: AnchorSpan[]): Segment[] {
  if (length <= 0) {
    return [];
  }
  const clamped = spans
    .map((s) => ({
      start: Math.max(0, Math.min(length, s.start)),
      end: Math.max(0, Math.min(length, s.end)),
      fact: s.fact,
    }))
    .filter((s) => s.end > s.start);

  const cuts = new Set<number>([0, length]);
  for (const span of clamped) {
    cuts.add(span.start);
    cuts.add(span.end);
  }
  const bounds = Array.from(cuts).sort((a, b) => a - b);

  const out: Segment[] = [];
  for (let i = 0; i + 1 < bounds.length; i += 1) {
    const start = bounds[i];
    const end = bounds[i + 1];
    const facts = clamped
      .filter((s) => s.start <= start && s.end >= end)
      .map((s) => s.fact);
    out.push({ start, end, facts });
  }
  return out;
}
