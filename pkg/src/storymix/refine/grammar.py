"""Constrained natural-language grammar for script edits.

Grammar mode matches a documented, case-insensitive pattern family (see
docs/edit-grammar.md): gain verbs, insert/delete/move, emotion and text
adjustments, and description replacement, with ordinal / kind / keyword /
time selectors. Anything outside the grammar is an explicit no-parse,
never a silent guess. backend_llm mode asks the text model to emit the
same command schema as JSON and falls back to grammar mode when the reply
does not validate.
"""
from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass, field

from ..backends.base import TextRequest
from ..script.model import EMOTIONS, ProductionScript
from .commands import (
    CATEGORIES,
    CATEGORY_ACOUSTIC,
    CATEGORY_GAIN,
    CATEGORY_SPEECH,
    CATEGORY_STRUCTURAL,
    DEFAULT_GAIN_STEP_DB,
    DEFAULT_INSERT_DURATION,
    EditCommand,
    NoParse,
    Selector,
)

log = logging.getLogger(__name__)


@dataclass
class ParseOutcome:
    """Parsed commands plus any segments that refused to parse."""

    commands: list[EditCommand] = field(default_factory=list)
    unparsed: list[NoParse] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return bool(self.commands) and not self.unparsed


EMOTION_WORDS = {
    "sorrowful": "sadness", "sad": "sadness", "sadder": "sadness", "mournful": "sadness",
    "melancholic": "sadness", "melancholy": "sadness", "gloomy": "sadness",
    "tearful": "sadness", "somber": "sadness", "sombre": "sadness",
    "angry": "anger", "angrier": "anger", "furious": "anger", "irate": "anger",
    "enraged": "anger", "harsh": "anger", "aggressive": "anger", "hostile": "anger",
    "happy": "happiness", "happier": "happiness", "cheerful": "happiness",
    "joyful": "happiness", "upbeat": "happiness", "delighted": "happiness",
    "gleeful": "happiness", "excited": "happiness",
    "scared": "fear", "fearful": "fear", "frightened": "fear", "terrified": "fear",
    "anxious": "fear", "nervous": "fear", "tense": "fear", "panicked": "fear",
    "worried": "fear",
    "disgusted": "disgust", "revolted": "disgust", "repulsed": "disgust",
    "contemptuous": "disgust", "disdainful": "disgust",
    "surprised": "surprise", "astonished": "surprise", "shocked": "surprise",
    "amazed": "surprise", "startled": "surprise",
    "calm": "neutral", "neutral": "neutral", "flat": "neutral", "even": "neutral",
    "composed": "neutral", "relaxed": "neutral", "plain": "neutral",
}

_SPEECH_KINDS = r"dialogues?|lines?|speech(?:es)?|narrations?|voices?|utterances?"
_SFX_KINDS = r"sound effects?|sfx|effects?"
_BGM_KINDS = r"background music|backing track|bgm|music|soundtrack|score|underscore|melody|theme|tune"
_ALL_KINDS = r"everything|the mix|all tracks?|master|the whole mix"

_ORDINAL_WORDS = {
    "first": 1, "second": 2, "third": 3, "fourth": 4, "fifth": 5,
    "sixth": 6, "seventh": 7, "eighth": 8, "ninth": 9, "tenth": 10,
}
_ORD = r"(?:\d+(?:st|nd|rd|th)|first|second|third|fourth|fifth|sixth|seventh|eighth|ninth|tenth|last)"
_TIME = r"(?:\d+:\d{2}(?:\.\d+)?|\d+(?:\.\d+)?)"

_DOWN_VERBS = r"lower|turn down|reduce|decrease|soften|quieten|quiet down|quiet"
_UP_VERBS = r"raise|turn up|increase|boost|amplify"
_INSERT_VERBS = r"insert|add"
_DELETE_VERBS = r"delete|remove|cut"
_CHANGE_VERBS = r"change|replace|swap|turn"
_SOUND_WORDS = r"sound effect|sound|sfx|effect|noise|audio"

_VERB_STARTERS = (
    "lower", "turn", "raise", "increase", "reduce", "decrease", "soften", "quiet",
    "quieten", "boost", "amplify", "set", "make", "insert", "add", "delete",
    "remove", "cut", "move", "change", "replace", "swap",
)


def _parse_ordinal(word: str) -> int:
    if word == "last":
        return -1
    if word in _ORDINAL_WORDS:
        return _ORDINAL_WORDS[word]
    return int(re.match(r"(\d+)", word).group(1))


def _parse_time(text: str) -> float:
    text = text.strip()
    if ":" in text:
        minutes, seconds = text.split(":", 1)
        return float(minutes) * 60.0 + float(seconds)
    return float(text)


def _kind_of(word: str) -> str | None:
    if re.fullmatch(_SPEECH_KINDS, word):
        return "speech"
    if re.fullmatch(_SFX_KINDS, word):
        return "sfx"
    if re.fullmatch(_BGM_KINDS, word):
        return "bgm"
    return None


def parse_target(text: str) -> Selector | None:
    """Turn a target phrase into a Selector; None if not addressable."""
    text = text.strip().lower()
    text = re.sub(r"^(the|this|that)\s+", "", text)
    if not text:
        return None

    m = re.fullmatch(r"#?entry\s+(\S+)|#(\S+)", text)
    if m:
        return Selector(entry_id=m.group(1) or m.group(2))

    if re.fullmatch(_ALL_KINDS, text):
        return Selector()

    m = re.fullmatch(rf"({_ORD})\s+({_SPEECH_KINDS}|{_SFX_KINDS}|{_BGM_KINDS})", text)
    if m:
        return Selector(kind=_kind_of(m.group(2)), ordinal=_parse_ordinal(m.group(1)))

    kind = _kind_of(text)
    if kind:
        return Selector(kind=kind)

    m = re.fullmatch(rf"(sound|music|entry|one)\s+at\s+({_TIME})\s*(?:s|secs?|seconds?)?", text)
    if m:
        noun_kind = {"sound": "sfx", "music": "bgm"}.get(m.group(1))
        return Selector(kind=noun_kind, time_point=_parse_time(m.group(2)))

    # Keyword selector: "rain sound", "thunder", "footsteps effect".
    m = re.fullmatch(rf"(.+?)\s+(?:{_SOUND_WORDS}|{_BGM_KINDS})", text)
    keyword = (m.group(1) if m else text).strip()
    if not keyword or len(keyword) > 60:
        return None
    kind = None
    if m and _kind_of(m.group(0).rsplit(" ", 1)[-1]) == "bgm":
        kind = "bgm"
    return Selector(keyword=keyword, kind=kind)


def _amount(match_dict: dict, default: float) -> float:
    amt = match_dict.get("amt")
    return float(amt) if amt else default


_BY_DB = r"(?:\s+by\s+(?P<amt>\d+(?:\.\d+)?)\s*(?:db|decibels?))?"
_VOL_WORD = r"(?:\s+(?:volume|level|loudness|sound))?"


def _gain(target: str, delta: float):
    sel = parse_target(target)
    if sel is None:
        return None
    return EditCommand(CATEGORY_GAIN, sel, {"delta_db": delta})


def _build_gain_down(m, ctx):
    return _gain(m.group("target"), -_amount(m.groupdict(), DEFAULT_GAIN_STEP_DB))


def _build_gain_up(m, ctx):
    return _gain(m.group("target"), +_amount(m.groupdict(), DEFAULT_GAIN_STEP_DB))


def _build_gain_set(m, ctx):
    sel = parse_target(m.group("target"))
    if sel is None:
        return None
    return EditCommand(CATEGORY_GAIN, sel, {"set_db": float(m.group("db"))})


def _build_louder_quieter(m, ctx):
    step = _amount(m.groupdict(), DEFAULT_GAIN_STEP_DB)
    delta = step if m.group("dir") == "louder" else -step
    return _gain(m.group("target"), delta)


def _build_insert(m, ctx):
    description = m.group("desc").strip()
    if not description:
        return None
    time_text = m.groupdict().get("time")
    if time_text:
        at = _parse_time(time_text)
    elif ctx.cursor_time is not None:
        at = float(ctx.cursor_time)
    else:
        return NoParse(ctx.segment, "insertion point: say 'at <seconds>s' or supply a cursor time")
    kind = "bgm" if re.search(rf"\b(?:{_BGM_KINDS})\b", description) else "sfx"
    return EditCommand(
        CATEGORY_STRUCTURAL,
        Selector(),
        {"insert": {"kind": kind, "description": description, "start_time": at,
                    "duration": DEFAULT_INSERT_DURATION}},
    )


def _build_delete(m, ctx):
    sel = parse_target(m.group("target"))
    if sel is None:
        return None
    return EditCommand(CATEGORY_STRUCTURAL, sel, {"delete": True})


def _build_move(m, ctx):
    sel = parse_target(m.group("target"))
    if sel is None:
        return None
    return EditCommand(CATEGORY_STRUCTURAL, sel, {"move_to": _parse_time(m.group("time"))})


def _speech_selector(target: str) -> Selector | None:
    target = target.strip()
    if re.fullmatch(r"(the\s+)?(tone|voice|delivery|speaking|acting)", target):
        return Selector(kind="speech")
    sel = parse_target(target)
    if sel is None or sel.keyword is not None:
        return None
    if sel.kind is None and sel.entry_id is None:
        sel = Selector(kind="speech", ordinal=sel.ordinal, time_point=sel.time_point)
    if sel.kind not in (None, "speech"):
        return None
    return sel


def _build_more_emotion(m, ctx):
    adjective = m.group("adj").lower()
    emotion = EMOTION_WORDS.get(adjective)
    if emotion is None:
        return NoParse(ctx.segment, f"unknown emotion adjective {adjective!r}")
    sel = _speech_selector(m.group("target"))
    if sel is None:
        return None
    return EditCommand(CATEGORY_SPEECH, sel, {"emotion": emotion})


def _build_say_text(m, ctx):
    sel = _speech_selector(m.group("target"))
    if sel is None:
        return None
    return EditCommand(CATEGORY_SPEECH, sel, {"text": m.group("text")})


def _build_change_description(m, ctx):
    sel = parse_target(m.group("target"))
    if sel is None:
        return None
    if sel.kind == "speech":
        return None
    new = m.group("new").strip()
    if not new:
        return None
    return EditCommand(CATEGORY_ACOUSTIC, sel, {"description": new})


@dataclass
class _Context:
    segment: str
    cursor_time: float | None


# Ordered: most specific first. "turn down/up" must win over acoustic "turn X into Y";
# text changes must win over acoustic "change X to Y".
_PATTERNS = [
    (rf"set\s+(?:the\s+)?(?P<target>.+?)\s+volume\s+to\s+(?P<db>[+-]?\d+(?:\.\d+)?)\s*(?:db|decibels?)",
     _build_gain_set),
    (rf"(?:{_DOWN_VERBS})\s+(?:the\s+)?(?P<target>.+?){_VOL_WORD}{_BY_DB}", _build_gain_down),
    (rf"(?:{_UP_VERBS})\s+(?:the\s+)?(?P<target>.+?){_VOL_WORD}{_BY_DB}", _build_gain_up),
    (rf"make\s+(?:the\s+)?(?P<target>.+?)\s+(?P<dir>louder|quieter|softer){_BY_DB}",
     _build_louder_quieter),
    (rf"(?:{_INSERT_VERBS})\s+(?:a\s+|an\s+|the\s+|some\s+)?(?P<desc>.+?)"
     rf"(?:\s+(?:{_SOUND_WORDS}))?"
     rf"(?:\s+(?:here|at\s+(?P<time>{_TIME})\s*(?:s|secs?|seconds?)?))?",
     _build_insert),
    (rf"(?:{_DELETE_VERBS})\s+(?:the\s+)?(?P<target>.+)", _build_delete),
    (rf"move\s+(?:the\s+)?(?P<target>.+?)\s+to\s+(?P<time>{_TIME})\s*(?:s|secs?|seconds?)?",
     _build_move),
    (rf"(?:change|rewrite)\s+(?:the\s+)?(?P<target>.+?)\s+(?:text|line|words)\s+to\s+"
     rf"[\"'](?P<text>.+)[\"']", _build_say_text),
    (rf"make\s+(?:the\s+)?(?P<target>.+?)\s+say\s+[\"'](?P<text>.+)[\"']", _build_say_text),
    (rf"make\s+(?:the\s+)?(?P<target>.+?)\s+(?:(?:sound|feel|seem)\s+)?"
     rf"(?:(?:a\s+(?:bit|little|touch)|much|slightly|way)\s+)?more\s+(?P<adj>[a-z]+)",
     _build_more_emotion),
    (rf"(?:{_CHANGE_VERBS})\s+(?:the\s+)?(?P<target>.+?)\s+"
     rf"(?:to|into|with|for)\s+(?:a\s+|an\s+|the\s+)?(?P<new>.+)", _build_change_description),
]

_COMPILED = [(re.compile(p, re.IGNORECASE), builder) for p, builder in _PATTERNS]


def split_segments(text: str) -> list[str]:
    """Split multi-command feedback on conjunctions, keeping descriptions
    (e.g. 'thunder and rain') intact by requiring a verb after the split."""
    rough = re.split(r";|,?\s+and then\s+|,?\s+then\s+", text)
    segments = []
    for part in rough:
        pieces = re.split(r"\s+and\s+", part)
        merged = []
        for piece in pieces:
            first = piece.strip().split(" ", 1)[0].lower()
            if merged and first not in _VERB_STARTERS:
                merged[-1] = merged[-1] + " and " + piece
            else:
                merged.append(piece)
        segments.extend(m.strip() for m in merged if m.strip())
    return segments


def _normalize(segment: str) -> str:
    seg = segment.strip()
    seg = re.sub(r"^(please|could you|can you|would you|kindly)\s+", "", seg, flags=re.I)
    return seg.rstrip(".!? ").strip()


def parse_segment(segment: str, cursor_time: float | None = None):
    """One command phrase -> EditCommand | NoParse."""
    seg = _normalize(segment)
    if not seg:
        return NoParse(segment, "empty instruction")
    ctx = _Context(segment=segment, cursor_time=cursor_time)
    for pattern, builder in _COMPILED:
        m = pattern.fullmatch(seg)
        if m is None:
            continue
        built = builder(m, ctx)
        if built is not None:
            return built
    return NoParse(segment, "no grammar rule matched")


def _resolve_or_refuse(command: EditCommand, script: ProductionScript):
    if "insert" in command.payload:
        return command
    if command.target.resolve(script):
        return command
    return NoParse(
        command.target.describe(),
        f"selector '{command.target.describe()}' matches nothing in script v{script.version}",
    )


def parse_instruction(text: str, script: ProductionScript, mode: str = "grammar",
                      gateway=None, cursor_time: float | None = None) -> ParseOutcome:
    """Parse feedback text into edit commands against a concrete script."""
    if mode == "backend_llm":
        outcome = _parse_with_backend(text, script, gateway, cursor_time)
        if outcome is not None:
            return outcome
        log.info("backend parse unusable; falling back to grammar mode")

    outcome = ParseOutcome()
    for segment in split_segments(text):
        result = parse_segment(segment, cursor_time=cursor_time)
        if isinstance(result, NoParse):
            outcome.unparsed.append(result)
            continue
        result = _resolve_or_refuse(result, script)
        if isinstance(result, NoParse):
            outcome.unparsed.append(result)
        else:
            outcome.commands.append(result)
    if not outcome.commands and not outcome.unparsed:
        outcome.unparsed.append(NoParse(text, "empty instruction"))
    return outcome


_SELECTOR_KEYS = {"entry_id", "kind", "ordinal", "keyword", "time_point"}
_PAYLOAD_KEYS = {
    CATEGORY_GAIN: {"delta_db", "set_db"},
    CATEGORY_STRUCTURAL: {"insert", "delete", "move_to"},
    CATEGORY_SPEECH: {"emotion", "text"},
    CATEGORY_ACOUSTIC: {"description"},
}


def _parse_with_backend(text, script, gateway, cursor_time) -> ParseOutcome | None:
    if gateway is None:
        return None
    prompt = (
        "Convert the user's audio-edit feedback into JSON commands.\n"
        'Schema: {"commands": [{"category": "...", "target": {...}, "payload": {...}}]}\n'
        f"Categories: {list(CATEGORIES)}\n"
        f"Cursor time: {cursor_time}\n"
        f"Feedback: {text}\n"
        f"Script entries: {[e.entry_id for e in script.tracks]}"
    )
    try:
        reply = gateway.call("text", TextRequest(prompt=prompt, purpose="parse_edit")).text
        doc = json.loads(reply)
        commands = []
        for item in doc["commands"]:
            category = item["category"]
            if category not in CATEGORIES:
                raise ValueError(f"bad category {category!r}")
            target = item.get("target", {})
            if not set(target) <= _SELECTOR_KEYS:
                raise ValueError(f"bad selector keys {set(target)}")
            payload = item.get("payload", {})
            if not set(payload) <= _PAYLOAD_KEYS[category] or not payload:
                raise ValueError(f"bad payload keys {set(payload)} for {category}")
            commands.append(EditCommand(category, Selector(**target), dict(payload)))
        outcome = ParseOutcome()
        for command in commands:
            resolved = _resolve_or_refuse(command, script)
            if isinstance(resolved, NoParse):
                outcome.unparsed.append(resolved)
            else:
                outcome.commands.append(resolved)
        return outcome
    except Exception as exc:
        log.debug("backend_llm parse failed: %s", exc)
        return None


def emotion_lexicon() -> dict[str, str]:
    """Adjective -> basis emotion map (a copy; the grammar owns the original)."""
    assert set(EMOTION_WORDS.values()) <= set(EMOTIONS)
    return dict(EMOTION_WORDS)
