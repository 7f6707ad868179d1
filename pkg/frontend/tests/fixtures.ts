/** Response payloads recorded from a live service over a small seeded
 * workspace; regenerated rather than edited by hand. Tests assert the
 * DOM repeats these numbers exactly.
 */

import type {
  AnnotationRecord,
  ConsensusFact,
  ConvergencePoint,
  CoverageReport,
  DocumentRecord,
  Graph,
  GraphDiff,
  GuidelineRecord,
  HistogramReport,
  IaaMatrix,
  MatchResult,
  ParseResponse,
  RoundRecord,
} from "../src/api.js";

export const doc1: DocumentRecord = {
  "id": "doc1",
  "language": "en",
  "source": "",
  "text": "Anna meets Bob. Bob pays the fee."
};

export const annotationA: AnnotationRecord = {
  "annotator_id": "p1",
  "created_at": "2026-01-05T12:00:00+00:00",
  "document_id": "doc1",
  "facts": [
    {
      "anchors": [
        [
          0,
          14
        ]
      ],
      "text": "Anna meets Bob"
    },
    {
      "anchors": [
        [
          16,
          32
        ]
      ],
      "text": "Bob pays the fee"
    }
  ],
  "guideline_version_id": "g1",
  "id": "a1"
};

export const annotationB: AnnotationRecord = {
  "annotator_id": "p2",
  "created_at": "2026-01-05T12:00:00+00:00",
  "document_id": "doc1",
  "facts": [
    {
      "anchors": [
        [
          0,
          14
        ]
      ],
      "text": "Anna meets Bob"
    },
    {
      "anchors": [],
      "text": "the meeting is paid for"
    }
  ],
  "guideline_version_id": "g1",
  "id": "a2"
};

export const guideline1: GuidelineRecord = {
  "body": "mark every claim",
  "created_at": "2026-01-05T12:00:00+00:00",
  "id": "g1",
  "version": 1
};

export const guideline2: GuidelineRecord = {
  "body": "split conjunctions",
  "created_at": "2026-02-01T12:00:00+00:00",
  "id": "g2",
  "version": 2
};

export const round1: RoundRecord = {
  "annotation_ids": [
    "a1",
    "a2",
    "a6"
  ],
  "guideline_version_id": "g1",
  "id": "r1",
  "notes": ""
};

export const round2: RoundRecord = {
  "annotation_ids": [
    "a3",
    "a4"
  ],
  "guideline_version_id": "g2",
  "id": "r2",
  "notes": ""
};

export const matchDefault: MatchResult = {
  "annotation_a_id": "a1",
  "annotation_b_id": "a2",
  "assignment": [
    [
      0,
      0
    ],
    [
      1,
      1
    ]
  ],
  "iaa": 0.3333333333333333,
  "matches": [
    [
      0,
      0
    ]
  ],
  "matrix": {
    "cols": 2,
    "rows": 2,
    "values": [
      [
        1.0,
        0.22450662753346862
      ],
      [
        0.11785113019775793,
        0.21166687833365083
      ]
    ]
  },
  "threshold": 0.7
};

export const matchLoose: MatchResult = {
  "annotation_a_id": "a1",
  "annotation_b_id": "a2",
  "assignment": [
    [
      0,
      0
    ],
    [
      1,
      1
    ]
  ],
  "iaa": 1.0,
  "matches": [
    [
      0,
      0
    ],
    [
      1,
      1
    ]
  ],
  "matrix": {
    "cols": 2,
    "rows": 2,
    "values": [
      [
        1.0,
        0.22450662753346862
      ],
      [
        0.11785113019775793,
        0.21166687833365083
      ]
    ]
  },
  "threshold": 0.2
};

export const heatmapRound1: IaaMatrix = {
  "annotator_ids": [
    "p1",
    "p2",
    "p3"
  ],
  "scope": "doc1",
  "values": [
    [
      1.0,
      0.3333333333333333,
      0.6666666666666666
    ],
    [
      0.3333333333333333,
      1.0,
      0.25
    ],
    [
      0.6666666666666666,
      0.25,
      1.0
    ]
  ]
};

export const histogramReport: HistogramReport = {
  "aggregates": [
    {
      "annotator_id": "p1",
      "max": 2,
      "mean": 1.6666666666666667,
      "median": 2.0,
      "min": 1
    },
    {
      "annotator_id": "p2",
      "max": 2,
      "mean": 2.0,
      "median": 2.0,
      "min": 2
    },
    {
      "annotator_id": "p3",
      "max": 3,
      "mean": 3.0,
      "median": 3.0,
      "min": 3
    }
  ],
  "counts": [
    {
      "annotator_id": "p1",
      "count": 2,
      "document_id": "doc1"
    },
    {
      "annotator_id": "p1",
      "count": 2,
      "document_id": "doc1"
    },
    {
      "annotator_id": "p1",
      "count": 1,
      "document_id": "doc2"
    },
    {
      "annotator_id": "p2",
      "count": 2,
      "document_id": "doc1"
    },
    {
      "annotator_id": "p2",
      "count": 2,
      "document_id": "doc1"
    },
    {
      "annotator_id": "p3",
      "count": 3,
      "document_id": "doc1"
    }
  ]
};

export const histogramEmpty: HistogramReport = {
  "aggregates": [],
  "counts": []
};

export const convergencePoints: ConvergencePoint[] = [
  {
    "guideline_version_id": "g1",
    "mean_iaa": 0.4166666666666667,
    "median_iaa": 0.3333333333333333,
    "pair_count": 3
  },
  {
    "guideline_version_id": "g2",
    "mean_iaa": 1.0,
    "median_iaa": 1.0,
    "pair_count": 1
  }
];

export const coverageA: CoverageReport = {
  "covered": [
    [
      0,
      14
    ],
    [
      16,
      32
    ]
  ],
  "document_id": "doc1",
  "gaps": [
    [
      14,
      16
    ],
    [
      32,
      33
    ]
  ],
  "overspecified": [],
  "unanchored": []
};

export const sourceGraph: Graph = {
  "edges": [
    [
      "anna",
      "meets",
      "bob"
    ]
  ],
  "nodes": [
    {
      "label": "anna",
      "spans": [
        [
          0,
          4
        ]
      ]
    },
    {
      "label": "bob",
      "spans": [
        [
          11,
          14
        ],
        [
          16,
          19
        ]
      ]
    }
  ],
  "origin": "source_text"
};

export const factGraphsA: Graph[] = [
  {
    "edges": [
      [
        "anna",
        "meets",
        "bob"
      ]
    ],
    "nodes": [
      {
        "label": "anna",
        "spans": [
          [
            0,
            4
          ]
        ]
      },
      {
        "label": "bob",
        "spans": [
          [
            11,
            14
          ]
        ]
      }
    ],
    "origin": "fact"
  },
  {
    "edges": [],
    "nodes": [
      {
        "label": "bob",
        "spans": [
          [
            0,
            3
          ]
        ]
      }
    ],
    "origin": "fact"
  }
];

export const emptyDiff: GraphDiff = {
  "extra_edges": [],
  "extra_nodes": [],
  "missing_edges": [],
  "missing_nodes": [],
  "uncertain": []
};

export const parseCond: ParseResponse = {
  "decompositions": [
    {
      "facts": [
        "if you are a resident, you need permit A",
        "if you are a resident, permit B"
      ],
      "strategy": "replicate_condition"
    },
    {
      "facts": [
        "you are a resident (condition)",
        "you need permit A",
        "permit B"
      ],
      "strategy": "omit_condition"
    }
  ],
  "tree": {
    "antecedent": {
      "text": "you are a resident",
      "type": "leaf"
    },
    "consequent": {
      "children": [
        {
          "text": "you need permit A",
          "type": "leaf"
        },
        {
          "text": "permit B",
          "type": "leaf"
        }
      ],
      "cues": [
        "and"
      ],
      "type": "and"
    },
    "cue": "If",
    "type": "cond"
  }
};

export const parseLeaf: ParseResponse = {
  "decompositions": [
    {
      "facts": [
        "Submit the form."
      ],
      "strategy": "replicate_condition"
    }
  ],
  "tree": {
    "text": "Submit the form.",
    "type": "leaf"
  }
};

export const consensusR1: ConsensusFact[] = [
  {
    "annotator_ids": [
      "p1",
      "p2",
      "p3"
    ],
    "cluster_size": 3,
    "text": "Anna meets Bob"
  },
  {
    "annotator_ids": [
      "p1",
      "p3"
    ],
    "cluster_size": 2,
    "text": "Bob pays the fee"
  }
];
