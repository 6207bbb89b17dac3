// Payload shapes of the mmref session service (schema_version 1).

export interface SceneObjectDoc {
  id: string;
  type: string;
  attributes: Record<string, string | number>;
  position: [number, number];
  visible: boolean;
}

export interface SceneDoc {
  capture_radius: number;
  schema: Record<string, string[]>;
  objects: SceneObjectDoc[];
}

export type EventKind = 'token' | 'gesture' | 'end-turn';

export interface TokenPayload {
  text: string;
  begin: number;
  end: number;
}

export interface GesturePayload {
  kind: 'point' | 'circle';
  at: [number, number];
  radius: number;
  begin: number;
  end: number;
}

export interface EventRecord {
  kind: EventKind;
  payload?: TokenPayload | GesturePayload;
  time?: number;
}

export interface AssignmentDoc {
  object: string;
  score: number;
  source: string;
}

export interface ResolutionResultDoc {
  assignments: Record<string, AssignmentDoc[]>;
  unresolved: number[];
  reasons: Record<string, string>;
  flags: Record<string, unknown>;
}

export interface BreakdownRow {
  expression: number;
  surface: string;
  object: string;
  status: 'gesture' | 'focus' | 'display';
  gesture_index: number | null;
  selectivity: number;
  status_likelihood: number;
  compatibility: {
    identifier: number;
    semantic: number;
    attributes: number;
    temporal: number;
  };
  score: number;
}

export interface VectorsDoc {
  g: { object: string; probability: number; gesture_index?: number }[];
  f: { object: string; probability: number }[];
  d: { object: string; probability: number }[];
  r: { index: number; surface: string; category: string }[];
}

export interface ResolutionResponse {
  schema_version: string;
  session: string;
  turn: number;
  turn_count: number;
  category: string | null;
  result: ResolutionResultDoc;
  focus: string[];
  vectors: VectorsDoc | null;
  breakdown: BreakdownRow[];
}
