"""Builder for the shipped 200-instruction evaluation corpus.

50 instructions per category over the three fixture scripts. Expected
effects are derived from the stated intent and the fixture constants, never
from the parser, so the corpus stays an independent yardstick. A slice of
each category is deliberately hard (out-of-grammar phrasing, ambiguous
selectors in overlapping-SFX scenes); grammar-mode accuracy on the shipped
file is pinned by tests.
"""
from __future__ import annotations

from ..script.model import GAIN_DB_MAX, GAIN_DB_MIN
from .commands import (
    CATEGORY_ACOUSTIC,
    CATEGORY_GAIN,
    CATEGORY_SPEECH,
    CATEGORY_STRUCTURAL,
)
from .iea import CorpusItem, fixture


def _clamp(g):
    return min(max(g, GAIN_DB_MIN), GAIN_DB_MAX)


def _gains_after(fixture_id, deltas=None, sets=None) -> dict:
    script = fixture(fixture_id)
    out = {}
    for eid, delta in (deltas or {}).items():
        out[eid] = _clamp(script.entry_by_id(eid).gain_db + delta)
    for eid, value in (sets or {}).items():
        out[eid] = _clamp(value)
    return out


def _gain_items() -> list[CorpusItem]:
    rows = [
        # (instruction, fixture, deltas, sets)
        ("lower the background music volume", "story_basic", {"bg001": -6}, None),
        ("Lower the background music volume by 3 dB", "story_basic", {"bg001": -3}, None),
        ("turn down the music", "story_basic", {"bg001": -6}, None),
        ("reduce the rain sound volume", "story_basic", {"fx001": -6}, None),
        ("decrease the rain volume by 2 dB", "story_basic", {"fx001": -2}, None),
        ("soften the door knock sound", "story_basic", {"fx002": -6}, None),
        ("quieten the string drone", "story_basic", {"bg001": -6}, None),
        ("raise the dialogue volume", "story_basic",
         {"sp001": 6, "sp002": 6, "sp003": 6}, None),
        ("turn up the 2nd sound effect by 4 dB", "story_basic", {"fx002": 4}, None),
        ("increase the music volume by 2.5 dB", "story_basic", {"bg001": 2.5}, None),
        ("boost the first dialogue by 1 dB", "story_basic", {"sp001": 1}, None),
        ("set the background music volume to -12 dB", "story_basic", None, {"bg001": -12}),
        ("set the rain sound volume to -20 dB", "story_basic", None, {"fx001": -20}),
        ("make the music quieter", "story_basic", {"bg001": -6}, None),
        ("make the door knock louder by 3 dB", "story_basic", {"fx002": 3}, None),
        ("make the 3rd dialogue louder", "story_basic", {"sp003": 6}, None),
        ("lower the sound effects by 4 dB", "story_basic", {"fx001": -4, "fx002": -4}, None),
        ("quiet the music", "story_basic", {"bg001": -6}, None),
        ("amplify the rain sound by 2 dB", "story_basic", {"fx001": 2}, None),
        ("lower everything by 2 dB", "story_basic",
         {"sp001": -2, "sp002": -2, "sp003": -2, "fx001": -2, "fx002": -2, "bg001": -2}, None),
        ("lower the synth bed volume", "dense_overlap", {"bg001": -6}, None),
        ("turn down the thunder by 6 dB", "dense_overlap", {"fx004": -6}, None),
        ("reduce the steady rain volume", "dense_overlap", {"fx003": -6}, None),
        ("raise the second dialogue volume by 2 dB", "dense_overlap", {"sp002": 2}, None),
        ("set the thunder volume to -3 dB", "dense_overlap", None, {"fx004": -3}),
        ("make the background music quieter by 4 dB", "dense_overlap", {"bg001": -4}, None),
        ("boost the dialogue", "dense_overlap", {"sp001": 6, "sp002": 6}, None),
        ("turn up the rain", "dense_overlap", {"fx003": 6}, None),
        ("decrease the footsteps on gravel volume by 1 dB", "dense_overlap",
         {"fx001": -1}, None),
        ("soften the last sound effect", "dense_overlap", {"fx004": -6}, None),
        ("lower the intro theme volume", "podcast_two_hosts", {"bg001": -6}, None),
        ("turn down the outro groove by 2 dB", "podcast_two_hosts", {"bg002": -2}, None),
        ("raise the chime volume by 5 dB", "podcast_two_hosts", {"fx001": 5}, None),
        ("set the intro theme volume to -16 dB", "podcast_two_hosts", None, {"bg001": -16}),
        ("make the 4th dialogue louder by 2 dB", "podcast_two_hosts", {"sp004": 2}, None),
        ("reduce the music by 3 dB", "podcast_two_hosts", {"bg001": -3, "bg002": -3}, None),
        ("turn up the dialogue by 1.5 dB", "podcast_two_hosts",
         {f"sp{i:03d}": 1.5 for i in range(1, 7)}, None),
        ("quieten the notification chime", "podcast_two_hosts", {"fx001": -6}, None),
        ("boost the outro groove by 4 dB", "podcast_two_hosts", {"bg002": 4}, None),
        ("make the first dialogue quieter by 2 dB", "podcast_two_hosts", {"sp001": -2}, None),
        ("lower the 1st bgm volume by 2 dB", "podcast_two_hosts", {"bg001": -2}, None),
        ("turn down the 2nd bgm", "podcast_two_hosts", {"bg002": -6}, None),
        ("set the chime volume to 0 dB", "podcast_two_hosts", None, {"fx001": 0}),
        ("increase the 5th dialogue volume by 3 dB", "podcast_two_hosts", {"sp005": 3}, None),
        ("make the intro theme softer", "podcast_two_hosts", {"bg001": -6}, None),
        ("lower the 3rd dialogue volume", "podcast_two_hosts", {"sp003": -6}, None),
        ("decrease the outro groove volume by 6 dB", "podcast_two_hosts", {"bg002": -6}, None),
        ("reduce the notification chime volume by 2.5 dB", "podcast_two_hosts",
         {"fx001": -2.5}, None),
        # Out-of-grammar phrasings: clear human intent, no matching rule.
        ("the music is drowning everything out, fix it", "story_basic", {"bg001": -6}, None),
        ("push the rain further back in the mix", "story_basic", {"fx001": -6}, None),
    ]
    return [
        CorpusItem(
            item_id=f"gain-{i + 1:03d}",
            category=CATEGORY_GAIN,
            instruction=instruction,
            fixture=fixture_id,
            expected={"effect": "gain", "gains": _gains_after(fixture_id, deltas, sets)},
        )
        for i, (instruction, fixture_id, deltas, sets) in enumerate(rows)
    ]


def _structural_items() -> list[CorpusItem]:
    items: list[CorpusItem] = []

    def insert(instruction, fixture_id, kind, contains, at, cursor=None):
        items.append(CorpusItem(
            item_id=f"struct-{len(items) + 1:03d}",
            category=CATEGORY_STRUCTURAL,
            instruction=instruction,
            fixture=fixture_id,
            cursor_time=cursor,
            expected={"effect": "insert", "kind": kind,
                      "description_contains": contains, "start_time": at},
        ))

    def delete(instruction, fixture_id, *targets):
        items.append(CorpusItem(
            item_id=f"struct-{len(items) + 1:03d}",
            category=CATEGORY_STRUCTURAL,
            instruction=instruction,
            fixture=fixture_id,
            expected={"effect": "delete", "targets": list(targets)},
        ))

    def move(instruction, fixture_id, moves, cursor=None):
        items.append(CorpusItem(
            item_id=f"struct-{len(items) + 1:03d}",
            category=CATEGORY_STRUCTURAL,
            instruction=instruction,
            fixture=fixture_id,
            cursor_time=cursor,
            expected={"effect": "move", "moves": moves},
        ))

    insert("insert a scream here", "story_basic", "sfx", "scream", 12.0, cursor=12.0)
    insert("add a thunder clap at 4s", "story_basic", "sfx", "thunder clap", 4.0)
    insert("insert a creaking door sound at 2.5s", "story_basic", "sfx", "creaking door", 2.5)
    insert("add a seagull cry at 0:06", "story_basic", "sfx", "seagull", 6.0)
    insert("insert ominous music at 1s", "story_basic", "bgm", "ominous", 1.0)
    insert("add a rooster crow at 0s", "story_basic", "sfx", "rooster", 0.0)
    insert("add a glass shatter at 7s", "story_basic", "sfx", "glass shatter", 7.0)
    insert("add a soft whoosh here", "story_basic", "sfx", "whoosh", 8.0, cursor=8.0)
    insert("add a crow caw at 6.5s", "story_basic", "sfx", "crow", 6.5)
    insert("insert a foghorn blast at 9s", "story_basic", "sfx", "foghorn", 9.0)
    insert("add a wolf howl here", "dense_overlap", "sfx", "wolf howl", 3.0, cursor=3.0)
    insert("insert a twig snap at 4.5s", "dense_overlap", "sfx", "twig snap", 4.5)
    insert("add a church bell toll at 10s", "dense_overlap", "sfx", "church bell", 10.0)
    insert("insert a heartbeat sound here", "dense_overlap", "sfx", "heartbeat", 7.2, cursor=7.2)
    insert("insert a distant siren at 11s", "dense_overlap", "sfx", "siren", 11.0)
    insert("insert a transition whoosh at 4.8s", "podcast_two_hosts", "sfx", "whoosh", 4.8)
    insert("add an applause sound at 14s", "podcast_two_hosts", "sfx", "applause", 14.0)
    insert("insert upbeat music at 8s", "podcast_two_hosts", "bgm", "upbeat", 8.0)
    insert("add rain ambience at 0s", "podcast_two_hosts", "sfx", "rain ambience", 0.0)
    insert("insert a typewriter clack at 3.3s", "podcast_two_hosts", "sfx", "typewriter", 3.3)
    insert("add a page turn sound at 1.2s", "podcast_two_hosts", "sfx", "page turn", 1.2)

    delete("delete the door knock sound", "story_basic", "fx002")
    delete("remove the 2nd sound effect", "story_basic", "fx002")
    delete("cut the string drone", "story_basic", "bg001")
    delete("delete the first sound effect", "story_basic", "fx001")
    delete("remove the background music", "story_basic", "bg001")
    delete("delete the thunder", "dense_overlap", "fx004")
    delete("remove the last sound effect", "dense_overlap", "fx004")
    delete("remove the footsteps in shallow puddles", "dense_overlap", "fx002")
    delete("delete the notification chime", "podcast_two_hosts", "fx001")
    delete("remove the outro groove", "podcast_two_hosts", "bg002")
    delete("cut the 6th dialogue", "podcast_two_hosts", "sp006")
    delete("delete the 2nd bgm", "podcast_two_hosts", "bg002")
    delete("cut the intro theme", "podcast_two_hosts", "bg001")
    delete("delete the sound at 5.5s", "podcast_two_hosts", "fx001")

    move("move the door knock to 5s", "story_basic", {"fx002": 5.0})
    move("move the heavy door knock to 0:04", "story_basic", {"fx002": 4.0})
    move("move the 2nd sound effect to 1.5s", "story_basic", {"fx002": 1.5})
    move("move the thunder to 8.5s", "dense_overlap", {"fx004": 8.5})
    move("move the last sound effect to 10s", "dense_overlap", {"fx004": 10.0})
    move("move the notification chime to 9s", "podcast_two_hosts", {"fx001": 9.0})
    move("move the outro groove to 13s", "podcast_two_hosts", {"bg002": 13.0})

    # Hard slice: relative anchors, vague references, overlapping targets.
    insert("drop a thunderclap right before the second line", "story_basic",
           "sfx", "thunderclap", 3.0)
    insert("add a stinger right after the reveal", "dense_overlap", "sfx", "stinger", 8.0)
    delete("get rid of the thing near the end", "story_basic", "fx002")
    move("move the sound at 2.9s to 6s", "story_basic", {"fx002": 6.0})
    delete("delete the footsteps", "dense_overlap", "fx001")
    insert("insert a scream at the courtyard crossing", "dense_overlap", "sfx", "scream", 2.0)
    move("swap the first and second lines", "podcast_two_hosts", {"sp001": 2.5})
    move("tighten the gap between the lines", "podcast_two_hosts", {"sp002": 2.2})

    return items


def _speech_items() -> list[CorpusItem]:
    items: list[CorpusItem] = []

    def emotion(instruction, fixture_id, targets, name):
        items.append(CorpusItem(
            item_id=f"speech-{len(items) + 1:03d}",
            category=CATEGORY_SPEECH,
            instruction=instruction,
            fixture=fixture_id,
            expected={"effect": "emotion", "targets": list(targets), "emotion": name},
        ))

    def text(instruction, fixture_id, texts):
        items.append(CorpusItem(
            item_id=f"speech-{len(items) + 1:03d}",
            category=CATEGORY_SPEECH,
            instruction=instruction,
            fixture=fixture_id,
            expected={"effect": "text", "texts": texts},
        ))

    emotion("make the 3rd dialogue more sorrowful", "story_basic", ["sp003"], "sadness")
    emotion("make the tone more sorrowful", "story_basic",
            ["sp001", "sp002", "sp003"], "sadness")
    emotion("make the first dialogue more cheerful", "story_basic", ["sp001"], "happiness")
    emotion("make the 2nd line more anxious", "story_basic", ["sp002"], "fear")
    emotion("make the narration more somber", "story_basic",
            ["sp001", "sp002", "sp003"], "sadness")
    emotion("make the 2nd dialogue sound more surprised", "story_basic", ["sp002"], "surprise")
    emotion("make the third line feel more tense", "story_basic", ["sp003"], "fear")
    emotion("make the 1st dialogue more mournful", "story_basic", ["sp001"], "sadness")
    emotion("make the 3rd dialogue much more terrified", "story_basic", ["sp003"], "fear")
    emotion("make the 2nd line a bit more gleeful", "story_basic", ["sp002"], "happiness")
    emotion("make the first line more shocked", "story_basic", ["sp001"], "surprise")
    emotion("make the 3rd line more melancholy", "story_basic", ["sp003"], "sadness")
    emotion("make the second dialogue more worried", "story_basic", ["sp002"], "fear")
    emotion("make the 1st dialogue more composed", "story_basic", ["sp001"], "neutral")
    emotion("make the voice more calm", "dense_overlap", ["sp001", "sp002"], "neutral")
    emotion("make the 1st dialogue more frightened", "dense_overlap", ["sp001"], "fear")
    emotion("make the second line more aggressive", "dense_overlap", ["sp002"], "anger")
    emotion("make the last dialogue more gloomy", "dense_overlap", ["sp002"], "sadness")
    emotion("make the 2nd dialogue more furious", "dense_overlap", ["sp002"], "anger")
    emotion("make the first line more startled", "dense_overlap", ["sp001"], "surprise")
    emotion("make the 1st dialogue more disdainful", "dense_overlap", ["sp001"], "disgust")
    emotion("make the second line much more hostile", "dense_overlap", ["sp002"], "anger")
    emotion("make the 2nd line more tearful", "dense_overlap", ["sp002"], "sadness")
    emotion("make the tone more relaxed", "podcast_two_hosts",
            [f"sp{i:03d}" for i in range(1, 7)], "neutral")
    emotion("make the 4th dialogue more excited", "podcast_two_hosts", ["sp004"], "happiness")
    emotion("make the 1st line much more upbeat", "podcast_two_hosts", ["sp001"], "happiness")
    emotion("make the 6th dialogue a bit more surprised", "podcast_two_hosts",
            ["sp006"], "surprise")
    emotion("make the 5th line more joyful", "podcast_two_hosts", ["sp005"], "happiness")
    emotion("make the 2nd dialogue slightly more nervous", "podcast_two_hosts",
            ["sp002"], "fear")
    emotion("make the 3rd line more delighted", "podcast_two_hosts", ["sp003"], "happiness")
    emotion("make the 4th line more astonished", "podcast_two_hosts", ["sp004"], "surprise")
    emotion("make the 6th line more irate", "podcast_two_hosts", ["sp006"], "anger")
    emotion("make the 2nd dialogue more disgusted", "podcast_two_hosts", ["sp002"], "disgust")
    emotion("make the 5th dialogue sound more amazed", "podcast_two_hosts",
            ["sp005"], "surprise")
    emotion("make the 1st dialogue more panicked", "podcast_two_hosts", ["sp001"], "fear")
    emotion("make the 3rd dialogue feel more gloomy", "podcast_two_hosts", ["sp003"], "sadness")
    emotion("make the last dialogue more cheerful", "podcast_two_hosts", ["sp006"], "happiness")
    emotion("make the 2nd line way more enraged", "dense_overlap", ["sp002"], "anger")
    emotion("make the first dialogue a touch more sad", "story_basic", ["sp001"], "sadness")
    emotion("make the 3rd dialogue more repulsed", "story_basic", ["sp003"], "disgust")

    text('change the 2nd dialogue text to "Did you hear that sound upstairs?"',
         "story_basic", {"sp002": "Did you hear that sound upstairs?"})
    text('make the 1st dialogue say "The rain would not stop that night."',
         "story_basic", {"sp001": "The rain would not stop that night."})
    text('change the 6th line text to "See you next week, everyone."',
         "podcast_two_hosts", {"sp006": "See you next week, everyone."})
    text('make the 2nd dialogue say "Eyes forward and keep moving."',
         "dense_overlap", {"sp002": "Eyes forward and keep moving."})
    text('change the 4th dialogue text to "Life always finds a way."',
         "podcast_two_hosts", {"sp004": "Life always finds a way."})
    text('make the 3rd line say "The pressure down there is unimaginable."',
         "podcast_two_hosts", {"sp003": "The pressure down there is unimaginable."})

    # Hard slice: unsupported comparatives, similes, colliding verbs.
    emotion("make the second line less flat", "podcast_two_hosts", ["sp002"], "happiness")
    emotion("have the narrator sound like she is about to cry", "story_basic",
            ["sp001", "sp003"], "sadness")
    emotion("make the 3rd dialogue more haunting", "story_basic", ["sp003"], "fear")
    emotion("soften the delivery of the second line", "dense_overlap", ["sp002"], "neutral")

    return items


def _acoustic_items() -> list[CorpusItem]:
    items: list[CorpusItem] = []

    def change(instruction, fixture_id, descriptions):
        items.append(CorpusItem(
            item_id=f"acoustic-{len(items) + 1:03d}",
            category=CATEGORY_ACOUSTIC,
            instruction=instruction,
            fixture=fixture_id,
            expected={"effect": "description", "descriptions": descriptions},
        ))

    change("change the rain sound to a storm", "story_basic", {"fx001": "storm"})
    change("replace the door knock with a doorbell ring", "story_basic",
           {"fx002": "doorbell ring"})
    change("change the string drone to a soft piano pad", "story_basic",
           {"bg001": "soft piano pad"})
    change("swap the rain for gentle snowfall ambience", "story_basic",
           {"fx001": "gentle snowfall ambience"})
    change("turn the door knock into a fist pounding on wood", "story_basic",
           {"fx002": "fist pounding on wood"})
    change("change the background music to a lonely violin melody", "story_basic",
           {"bg001": "lonely violin melody"})
    change("replace the rain sound with wind whistling through cracks", "story_basic",
           {"fx001": "wind whistling through cracks"})
    change("change the 2nd sound effect to a heavy iron knocker", "story_basic",
           {"fx002": "heavy iron knocker"})
    change("swap the first sound effect with soft drizzle on glass", "story_basic",
           {"fx001": "soft drizzle on glass"})
    change("change the music to a minor key music box", "story_basic",
           {"bg001": "minor key music box"})
    change("swap the thunder for a low rumble", "dense_overlap", {"fx004": "low rumble"})
    change("turn the steady rain into a violent downpour", "dense_overlap",
           {"fx003": "violent downpour"})
    change("swap the synth bed with warm analog pads", "dense_overlap",
           {"bg001": "warm analog pads"})
    change("change the footsteps on gravel to boots on wet stone", "dense_overlap",
           {"fx001": "boots on wet stone"})
    change("replace the footsteps in shallow puddles with squelching mud steps",
           "dense_overlap", {"fx002": "squelching mud steps"})
    change("change the thunder roll to a sharp lightning crack", "dense_overlap",
           {"fx004": "sharp lightning crack"})
    change("replace the steady rain with sleet tapping on metal", "dense_overlap",
           {"fx003": "sleet tapping on metal"})
    change("turn the background music into a slow heartbeat pulse", "dense_overlap",
           {"bg001": "slow heartbeat pulse"})
    change("change the last sound effect to rolling storm clouds", "dense_overlap",
           {"fx004": "rolling storm clouds"})
    change("replace the 3rd sound effect with a distant waterfall", "dense_overlap",
           {"fx002": "distant waterfall"})
    change("change the notification chime to a soft bell", "podcast_two_hosts",
           {"fx001": "soft bell"})
    change("replace the intro theme with an acoustic guitar intro", "podcast_two_hosts",
           {"bg001": "acoustic guitar intro"})
    change("change the outro groove to a jazzy outro", "podcast_two_hosts",
           {"bg002": "jazzy outro"})
    change("swap the chime for a marimba hit", "podcast_two_hosts", {"fx001": "marimba hit"})
    change("turn the intro theme into synthwave arpeggios", "podcast_two_hosts",
           {"bg001": "synthwave arpeggios"})
    change("change the 1st bgm to lo-fi hip hop beats", "podcast_two_hosts",
           {"bg001": "lo-fi hip hop beats"})
    change("replace the 2nd bgm with fading vinyl crackle", "podcast_two_hosts",
           {"bg002": "fading vinyl crackle"})
    change("change the first sound effect to a ukulele strum", "podcast_two_hosts",
           {"fx001": "ukulele strum"})
    change("swap the outro groove with ambient lounge chords", "podcast_two_hosts",
           {"bg002": "ambient lounge chords"})
    change("change the music at 12s to quiet closing piano", "podcast_two_hosts",
           {"bg002": "quiet closing piano"})
    change("replace the rain on windows sound with hail on a tin roof", "story_basic",
           {"fx001": "hail on a tin roof"})
    change("change the drone to deep cavern reverberations", "story_basic",
           {"bg001": "deep cavern reverberations"})
    change("turn the knock into three slow deliberate knocks", "story_basic",
           {"fx002": "three slow deliberate knocks"})
    change("replace the gravel footsteps with creaking floorboards", "dense_overlap",
           {"fx001": "creaking floorboards"})
    change("change the pulsing synth to muffled war drums", "dense_overlap",
           {"bg001": "muffled war drums"})
    change("swap the distant thunder with a freight train passing", "dense_overlap",
           {"fx004": "freight train passing"})
    change("change the chime sound to a wooden block tap", "podcast_two_hosts",
           {"fx001": "wooden block tap"})
    change("replace the intro music with bright brass fanfare", "podcast_two_hosts",
           {"bg001": "bright brass fanfare"})
    change("change the rain to rain with rolling thunder", "dense_overlap",
           {"fx003": "rain with rolling thunder"})
    change("turn the puddle footsteps into barefoot slaps on marble", "dense_overlap",
           {"fx002": "barefoot slaps on marble"})
    change("change the uneasy strings to warm cello swells", "story_basic",
           {"bg001": "warm cello swells"})
    change("replace the knock sound with knuckles on frosted glass", "story_basic",
           {"fx002": "knuckles on frosted glass"})
    change("swap the outro for a whistled reprise", "podcast_two_hosts",
           {"bg002": "whistled reprise"})
    change("change the steady rain sound to fat drops on canvas awnings", "dense_overlap",
           {"fx003": "fat drops on canvas awnings"})

    # Hard slice: overlapping-element ambiguity and out-of-grammar phrasing.
    change("change the footsteps to boots on gravel", "dense_overlap",
           {"fx002": "boots on gravel"})
    change("the rain should sound more like a storm", "story_basic", {"fx001": "storm"})
    change("darken the ambience", "dense_overlap", {"bg001": "darker tense synth bed"})
    change("make the rain heavier", "story_basic", {"fx001": "heavy rain"})
    change("replace the rain", "dense_overlap", {"fx003": "white noise wash"})
    change("change the background to nighttime crickets", "story_basic",
           {"bg001": "nighttime crickets"})

    return items


def reference_corpus() -> list[CorpusItem]:
    """The shipped 200-item corpus: 50 per category."""
    items = _gain_items() + _structural_items() + _speech_items() + _acoustic_items()
    by_cat = {}
    for it in items:
        by_cat.setdefault(it.category, []).append(it)
    assert all(len(v) == 50 for v in by_cat.values()), {k: len(v) for k, v in by_cat.items()}
    return items
