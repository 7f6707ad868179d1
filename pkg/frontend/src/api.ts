/** Typed client for the factalign HTTP service.
 *
 * Every number the UI displays comes through this module; nothing is
 * recomputed client-side. Shapes mirror docs/formats.md in the backend
 * repository.
 */

export interface DocumentRecord {
  id: string;
  text: string;
  language: string;
  source: string;
}

export interface FactRecord {
  text: string;
  anchors: [number, number][];
}

export interface AnnotationRecord {
  id: string;
  document_id: string;
  annotator_id: string;
  guideline_version_id: string;
  facts: FactRecord[];
  created_at: string;
}

export interface AnnotatorRecord {
  id: string;
  kind: "human" | "model";
  label: string;
}

export interface GuidelineRecord {
  id: string;
  version: number;
  body: string;
  created_at: string;
}

export interface RoundRecord {
  id: string;
  guideline_version_id: string;
  annotation_ids: string[];
  notes: string;
}

export interface MatchResult {
  annotation_a_id: string;
  annotation_b_id: string;
  assignment: [number, number][];
  matches: [number, number][];
  matrix: { rows: number; cols: number; values: number[][] };
  threshold: number;
  iaa: number;
}

export interface IaaMatrix {
  annotator_ids: string[];
  values: number[][];
  scope: string;
}

export interface HistogramReport {
  counts: { annotator_id: string; document_id: string; count: number }[];
  aggregates: {
    annotator_id: string;
    mean: number;
    median: number;
    min: number;
    max: number;
  }[];
}

export interface ConvergencePoint {
  guideline_version_id: string;
  mean_iaa: number;
  median_iaa: number;
  pair_count: number;
}

export interface CoverageReport {
  document_id: string;
  covered: [number, number][];
  gaps: [number, number][];
  overspecified: number[];
  unanchored: number[];
}

export interface GraphNode {
  label: string;
  spans: [number, number][];
}

export type Triple = [string, string, string];

export interface Graph {
  nodes: GraphNode[];
  edges: Triple[];
  origin: string;
}

export interface GraphDiff {
  missing_nodes: string[];
  extra_nodes: string[];
  missing_edges: Triple[];
  extra_edges: Triple[];
  uncertain: Triple[];
}

export type LogicTree =
  | { type: "leaf"; text: string }
  | { type: "and"; children: LogicTree[]; cues: string[] }
  | { type: "or"; children: LogicTree[]; cues: string[] }
  | { type: "cond"; antecedent: LogicTree; consequent: LogicTree; cue: string };

export interface Decomposition {
  facts: string[];
  strategy: "replicate_condition" | "omit_condition";
}

export interface ParseResponse {
  tree: LogicTree;
  decompositions: Decomposition[];
}

export interface ConsensusFact {
  text: string;
  annotator_ids: string[];
  cluster_size: number;
}

export interface CalibrationReport {
  best_threshold: number;
  objective_curve: [number, number][];
  gold_count: number;
}

export class ApiError extends Error {
  constructor(
    public status: number,
    message: string,
  ) {
    super(message);
  }
}

async function request<T>(
  base: string,
  method: "GET" | "POST" | "PUT",
  path: string,
  body?: unknown,
): Promise<T> {
  const response = await fetch(base + path, {
    method,
    headers: body === undefined ? {} : { "content-type": "application/json" },
    body: body === undefined ? undefined : JSON.stringify(body),
  });
  const payload = await response.json().catch(() => null);
  if (!response.ok) {
    const detail =
      payload && typeof payload === "object" && "error" in payload
        ? String((payload as { error: unknown }).error)
        : response.statusText;
    throw new ApiError(response.status, detail);
  }
  return payload as T;
}

function query(params: Record<string, string | undefined>): string {
  const search = new URLSearchParams();
  for (const [key, value] of Object.entries(params)) {
    if (value !== undefined) search.set(key, value);
  }
  const encoded = search.toString();
  return encoded ? `?${encoded}` : "";
}

export class ApiClient {
  constructor(private base: string = "") {}

  getDocument(id: string): Promise<DocumentRecord> {
    return request(this.base, "GET", `/documents/${encodeURIComponent(id)}`);
  }

  getAnnotation(id: string): Promise<AnnotationRecord> {
    return request(this.base, "GET", `/annotations/${encodeURIComponent(id)}`);
  }

  putAnnotation(record: AnnotationRecord): Promise<{ id: string }> {
    return request(
      this.base,
      "PUT",
      `/annotations/${encodeURIComponent(record.id)}`,
      record,
    );
  }

  getAnnotator(id: string): Promise<AnnotatorRecord> {
    return request(this.base, "GET", `/annotators/${encodeURIComponent(id)}`);
  }

  getGuideline(id: string): Promise<GuidelineRecord> {
    return request(this.base, "GET", `/guidelines/${encodeURIComponent(id)}`);
  }

  putGuideline(record: GuidelineRecord): Promise<{ id: string }> {
    return request(
      this.base,
      "PUT",
      `/guidelines/${encodeURIComponent(record.id)}`,
      record,
    );
  }

  getRound(id: string): Promise<RoundRecord> {
    return request(this.base, "GET", `/rounds/${encodeURIComponent(id)}`);
  }

  putRound(record: RoundRecord): Promise<{ id: string }> {
    return request(
      this.base,
      "PUT",
      `/rounds/${encodeURIComponent(record.id)}`,
      record,
    );
  }

  match(
    annotationA: string,
    annotationB: string,
    threshold?: number,
  ): Promise<MatchResult> {
    const body: Record<string, unknown> = {
      annotation_a: annotationA,
      annotation_b: annotationB,
    };
    if (threshold !== undefined) body.threshold = threshold;
    return request(this.base, "POST", "/match", body);
  }

  heatmap(scope: { document?: string; round?: string }): Promise<IaaMatrix> {
    return request(this.base, "GET", `/heatmap${query(scope)}`);
  }

  histogram(round?: string): Promise<HistogramReport> {
    return request(this.base, "GET", `/histogram${query({ round })}`);
  }

  convergence(): Promise<ConvergencePoint[]> {
    return request(this.base, "GET", "/convergence");
  }

  coverage(annotation: string): Promise<CoverageReport> {
    return request(this.base, "GET", `/coverage${query({ annotation })}`);
  }

  sourceGraph(document: string): Promise<Graph> {
    return request(this.base, "GET", `/graphs/source${query({ document })}`);
  }

  factGraphs(annotation: string): Promise<Graph[]> {
    return request(this.base, "GET", `/graphs/facts${query({ annotation })}`);
  }

  graphDiff(body: {
    document?: string;
    annotation?: string;
    reference?: Graph;
    candidate?: Graph;
  }): Promise<GraphDiff> {
    return request(this.base, "POST", "/graphs/diff", body);
  }

  parse(sentence: string, language?: string): Promise<ParseResponse> {
    const body: Record<string, unknown> = { sentence };
    if (language !== undefined) body.language = language;
    return request(this.base, "POST", "/branching/parse", body);
  }

  calibrate(goldIds: string[], gridStep?: number): Promise<CalibrationReport> {
    const body: Record<string, unknown> = { gold_ids: goldIds };
    if (gridStep !== undefined) body.grid_step = gridStep;
    return request(this.base, "POST", "/calibrate", body);
  }

  consensus(round: string, quorum?: number): Promise<ConsensusFact[]> {
    const body: Record<string, unknown> = { round };
    if (quorum !== undefined) body.quorum = quorum;
    return request(this.base, "POST", "/consensus", body);
  }
}
