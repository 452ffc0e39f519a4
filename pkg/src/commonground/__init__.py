"""Graded mutual-belief tracking for two-party dialogues.

Utterances provide evidence of varying strength for the assumptions behind
mutual understanding and acceptance; informationally redundant follow-ups
upgrade exactly those assumptions, defaults fill the gaps, and stronger
contrary evidence retracts what depended on a defeated belief.
"""

from .acceptance import (AcceptanceBelief, AcceptanceOutcome, ConflictEvidence,
                         RetractionReport, SupportLink, defeat, detect_conflict,
                         evaluate_acceptance, record_support)
from .engine import DialogueEngine, replay_transcript, trace_document
from .errors import (BadPropositionSyntax, CommonGroundError, ConflictDetected,
                     DanglingAntecedent, DefeatRejected, DuplicateUtterance,
                     OrderingViolation, ParseIssue, TranscriptError, UnknownProposition)
from .evidence import Strength, defeats, min_strength
from .grounding import (ActType, AssumptionRecord, IRUClass, Intonation, LicenseLink,
                        Participant, UnderstandingBelief, UtteranceEvent,
                        apply_any_next_upgrade, apply_iru_upgrade, classify_iru,
                        open_record, record_license_evidence, understanding_strength)
from .propositions import (Biconditional, Context, ContextEntry, Literal, Proposition,
                           RedundancyVerdict, Rule, format_proposition, parse_proposition,
                           prop_key)
from .state import DiscourseState, EngineConfig
from .stats import CorpusStats, StatsConfig, aggregate, collect_observations, render_stats
from .trace import TraceRecord, write_trace
from .transcript import Transcript, parse, serialize

__version__ = "0.1.0"

__all__ = [
    "AcceptanceBelief", "AcceptanceOutcome", "ActType", "AssumptionRecord",
    "BadPropositionSyntax", "Biconditional", "CommonGroundError", "ConflictDetected",
    "ConflictEvidence", "Context", "ContextEntry", "CorpusStats", "DanglingAntecedent",
    "DefeatRejected", "DialogueEngine", "DiscourseState", "DuplicateUtterance",
    "EngineConfig", "IRUClass", "Intonation", "LicenseLink", "Literal",
    "OrderingViolation", "ParseIssue", "Participant", "Proposition",
    "RedundancyVerdict", "RetractionReport", "Rule", "StatsConfig", "Strength",
    "SupportLink", "TraceRecord", "Transcript", "TranscriptError",
    "UnderstandingBelief", "UnknownProposition", "UtteranceEvent",
    "aggregate", "apply_any_next_upgrade", "apply_iru_upgrade", "classify_iru",
    "collect_observations", "defeat", "defeats", "detect_conflict",
    "evaluate_acceptance", "format_proposition", "min_strength", "open_record",
    "parse", "parse_proposition", "prop_key", "record_license_evidence",
    "record_support", "render_stats", "replay_transcript", "serialize",
    "trace_document", "understanding_strength", "write_trace",
]
