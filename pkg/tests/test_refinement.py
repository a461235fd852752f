import pytest

from storymix.refine import (
    CATEGORY_ACOUSTIC,
    CATEGORY_GAIN,
    CATEGORY_SPEECH,
    CATEGORY_STRUCTURAL,
    NoParse,
    apply_edit,
    fixture,
    parse_instruction,
    parse_segment,
    split_segments,
)
from storymix.script import EMOTIONS


@pytest.fixture
def story():
    return fixture("story_basic")


class TestGrammarParsing:
    def test_lower_background_music(self, story):
        out = parse_instruction("lower the background music volume", story)
        assert out.ok
        (cmd,) = out.commands
        assert cmd.category == CATEGORY_GAIN
        assert cmd.payload == {"delta_db": -6.0}
        assert [e.entry_id for e in cmd.target.resolve(story)] == ["bg001"]

    def test_insert_scream_here_with_cursor(self, story):
        out = parse_instruction("insert a scream here", story, cursor_time=12.0)
        assert out.ok
        (cmd,) = out.commands
        assert cmd.category == CATEGORY_STRUCTURAL
        assert cmd.payload["insert"]["description"] == "scream"
        assert cmd.payload["insert"]["start_time"] == 12.0
        assert cmd.payload["insert"]["kind"] == "sfx"

    def test_insert_here_without_cursor_is_no_parse(self, story):
        out = parse_instruction("insert a scream here", story)
        assert not out.commands
        assert out.unparsed and "cursor" in out.unparsed[0].reason

    def test_third_dialogue_more_sorrowful(self, story):
        out = parse_instruction("make the 3rd dialogue more sorrowful", story)
        assert out.ok
        (cmd,) = out.commands
        assert cmd.category == CATEGORY_SPEECH
        assert cmd.payload == {"emotion": "sadness"}
        assert [e.entry_id for e in cmd.target.resolve(story)] == ["sp003"]

    def test_change_rain_to_storm(self, story):
        out = parse_instruction("change the rain sound to a storm", story)
        assert out.ok
        (cmd,) = out.commands
        assert cmd.category == CATEGORY_ACOUSTIC
        assert cmd.payload == {"description": "storm"}
        assert [e.entry_id for e in cmd.target.resolve(story)] == ["fx001"]

    def test_unknown_verb_is_no_parse(self, story):
        out = parse_instruction("frobnicate the timeline", story)
        assert not out.commands
        assert isinstance(out.unparsed[0], NoParse)

    def test_unresolvable_selector_is_no_parse(self, story):
        out = parse_instruction("delete the helicopter sound", story)
        assert not out.commands
        assert "matches nothing" in out.unparsed[0].reason

    def test_parsing_is_total(self, story):
        # Every input yields commands or an explicit no-parse, never a crash.
        for text in ["", "   ", "???", "make it pop", "lower", "insert at 5s",
                     "move the to 3s", "set volume to db"]:
            out = parse_instruction(text, story)
            assert out.commands or out.unparsed

    def test_multi_command_split_preserves_descriptions(self):
        segments = split_segments(
            "insert thunder and rain at 3s and lower the music volume"
        )
        assert segments == ["insert thunder and rain at 3s", "lower the music volume"]

    def test_multi_command_round(self, story):
        out = parse_instruction(
            "lower the background music volume and delete the door knock sound", story
        )
        assert len(out.commands) == 2
        assert out.commands[0].category == CATEGORY_GAIN
        assert out.commands[1].category == CATEGORY_STRUCTURAL

    def test_ordinal_selectors_count_within_kind_by_time(self, story):
        cmd = parse_segment("delete the 2nd sound effect")
        ids = [e.entry_id for e in cmd.target.resolve(story)]
        assert ids == ["fx002"]  # fx001 starts at 0.0, fx002 at 2.9

    def test_gain_with_explicit_amount(self, story):
        (cmd,) = parse_instruction("raise the rain sound volume by 2.5 dB", story).commands
        assert cmd.payload == {"delta_db": 2.5}

    def test_set_volume(self, story):
        (cmd,) = parse_instruction("set the background music volume to -12 dB", story).commands
        assert cmd.payload == {"set_db": -12.0}

    def test_time_formats(self, story):
        (cmd,) = parse_instruction("add a bell toll at 0:07", story).commands
        assert cmd.payload["insert"]["start_time"] == 7.0

    def test_backend_llm_mode_with_valid_reply(self, story):
        import json

        from storymix.backends import Gateway, MockSuite

        reply = json.dumps({
            "commands": [{
                "category": "signal_gain_control",
                "target": {"kind": "bgm"},
                "payload": {"delta_db": -3.0},
            }]
        })
        gw = Gateway(sleeper=lambda s: None)
        gw.register_suite(MockSuite(text_script={"parse_edit": [reply]}))
        out = parse_instruction("whatever the model wants", story, mode="backend_llm",
                                gateway=gw)
        assert out.ok
        assert out.commands[0].payload == {"delta_db": -3.0}

    def test_backend_llm_mode_falls_back_to_grammar(self, story):
        from storymix.backends import Gateway, MockSuite

        gw = Gateway(sleeper=lambda s: None)
        gw.register_suite(MockSuite(text_script={"parse_edit": ["not json"]}))
        out = parse_instruction("lower the background music volume", story,
                                mode="backend_llm", gateway=gw)
        assert out.ok
        assert out.commands[0].category == CATEGORY_GAIN


class TestApplyEdit:
    def test_gain_only_change_has_empty_regen_plan(self, story):
        out = parse_instruction("lower the background music volume", story)
        result = apply_edit(story, out.commands)
        assert result.updated_script.version == story.version + 1
        assert result.updated_script.entry_by_id("bg001").gain_db == -10.0
        assert result.regen_plan == []
        assert set(result.affected) == {"bg001"}

    def test_description_change_lands_in_regen_plan(self, story):
        out = parse_instruction("change the rain sound to a storm", story)
        result = apply_edit(story, out.commands)
        assert result.regen_plan == ["fx001"]
        assert result.updated_script.entry_by_id("fx001").description == "storm"

    def test_insert_plus_gain_bumps_version_once(self, story):
        out = parse_instruction(
            "insert a scream at 4s and lower the background music volume", story
        )
        result = apply_edit(story, out.commands)
        assert result.updated_script.version == story.version + 1
        added = [eid for eid, d in result.affected.items() if d.change == "added"]
        assert len(added) == 1
        assert result.regen_plan == added

    def test_insert_gets_fresh_unique_id(self, story):
        out = parse_instruction("insert a scream at 4s", story)
        result = apply_edit(story, out.commands)
        new_ids = {e.entry_id for e in result.updated_script.tracks} - \
            {e.entry_id for e in story.tracks}
        assert new_ids == {"fx003"}

    def test_insert_past_end_extends_master_duration(self, story):
        out = parse_instruction("insert a scream at 30s", story)
        result = apply_edit(story, out.commands)
        assert result.updated_script.master_duration == pytest.approx(33.0)

    def test_zero_match_command_rejected_others_applied(self, story):
        out = parse_instruction("lower the background music volume", story)
        stale = out.commands + parse_instruction("delete the door knock sound", story).commands
        # Apply the delete first so the second application sees no knock.
        first = apply_edit(story, [stale[1]])
        second = apply_edit(first.updated_script, stale)
        assert len(second.applied) == 1
        assert len(second.rejected) == 1
        assert second.updated_script.version == first.updated_script.version + 1

    def test_emotion_shift_rule(self, story):
        out = parse_instruction("make the 3rd dialogue more sorrowful", story)
        result = apply_edit(story, out.commands)
        old_line = story.dialogue.line_by_id("L3")
        new_line = result.updated_script.dialogue.line_by_id("L3")
        expected = old_line.emotion.shifted_toward("sadness", 0.30)
        assert new_line.emotion.weights == pytest.approx(expected.weights)
        idx = EMOTIONS.index("sadness")
        assert new_line.emotion.weights[idx] > old_line.emotion.weights[idx]
        assert result.regen_plan == ["sp003"]

    def test_delete_removes_entry(self, story):
        out = parse_instruction("delete the door knock sound", story)
        result = apply_edit(story, out.commands)
        assert result.updated_script.entry_by_id("fx002") is None
        assert result.affected["fx002"].change == "removed"
        assert result.regen_plan == []

    def test_move_is_mix_only(self, story):
        out = parse_instruction("move the door knock to 5s", story)
        result = apply_edit(story, out.commands)
        assert result.updated_script.entry_by_id("fx002").start_time == 5.0
        assert result.regen_plan == []

    def test_no_commands_no_version_bump(self, story):
        result = apply_edit(story, [])
        assert result.updated_script.version == story.version
        assert not result.changed

    def test_updated_script_still_validates(self, story):
        from storymix.script import validate

        out = parse_instruction(
            "insert a scream at 4s and make the 2nd line more anxious"
            " and set the rain sound volume to -30 dB",
            story,
        )
        result = apply_edit(story, out.commands)
        assert validate(result.updated_script) == []
