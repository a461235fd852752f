from .commands import (
    CATEGORIES,
    CATEGORY_ACOUSTIC,
    CATEGORY_GAIN,
    CATEGORY_SPEECH,
    CATEGORY_STRUCTURAL,
    DEFAULT_GAIN_STEP_DB,
    EditCommand,
    EditResult,
    NoParse,
    RejectedCommand,
    Selector,
)
from .grammar import ParseOutcome, parse_instruction, parse_segment, split_segments
from .apply import RefinementRound, apply_edit, execute_refinement, fresh_entry_id
from .iea import (
    CorpusItem,
    IeaReport,
    evaluate_iea,
    evaluate_item,
    fixture,
    fixture_ids,
    load_corpus,
    write_corpus,
)
from .iea_corpus import reference_corpus

__all__ = [
    "CATEGORIES",
    "CATEGORY_ACOUSTIC",
    "CATEGORY_GAIN",
    "CATEGORY_SPEECH",
    "CATEGORY_STRUCTURAL",
    "CorpusItem",
    "DEFAULT_GAIN_STEP_DB",
    "EditCommand",
    "EditResult",
    "IeaReport",
    "NoParse",
    "ParseOutcome",
    "RefinementRound",
    "RejectedCommand",
    "Selector",
    "apply_edit",
    "evaluate_iea",
    "evaluate_item",
    "execute_refinement",
    "fixture",
    "fixture_ids",
    "fresh_entry_id",
    "load_corpus",
    "parse_instruction",
    "parse_segment",
    "reference_corpus",
    "split_segments",
    "write_corpus",
]
