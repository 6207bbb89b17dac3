"""Multimodal reference resolution engine.

Resolves referring expressions against scene objects by fusing deictic
gesture evidence, dialogue focus, and visual-display context.  The package
ships three resolvers behind one interface: the cognitive-status-driven
greedy search, a probabilistic graph matcher, and a four-step decision-list
baseline, plus an evaluation harness, a synthetic corpus generator, a CLI,
and an HTTP session service.
"""

from .context import Event, SessionState, build_status_vectors, segment_turns, update_focus
from .defaults import (builtin_corpus_records, builtin_scene, default_lexicon,
                       default_likelihood_table)
from .domain import (Assignment, CandidateObject, Category, GestureEvent,
                     ReferringExpression, ResolutionResult, Scene, SceneObject,
                     SceneValidationError, Status, StatusVectors, load_scene,
                     scene_from_dict, validate_scene)
from .gestures import build_gesture_vector, candidates_for_gesture
from .graphmatch import build_graphs, match_graphs, resolve_graph
from .greedy import resolve
from .harness import (CategoryReport, Scenario, benchmark_runtime, evaluate,
                      load_corpus, save_corpus)
from .generator import GeneratorParams, generate_synthetic_corpus
from .decisionlist import resolve_decision_list
from .parsing import Lexicon, Token, extract_referring_expressions, load_lexicon
from .replay import SessionRuntime, replay_events
from .scoring import (LikelihoodTable, ResolverConfig, TemporalMode,
                      load_likelihood_table, match_score)

__version__ = "0.1.0"
