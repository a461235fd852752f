import hashlib

import pytest

from storymix.backends import Gateway, MockSuite
from storymix.errors import LoopError, TransportError
from storymix.loops import (
    LoopConfig,
    LoopOutcome,
    derive_seed,
    refine_emotion,
    run_nonspeech_loop,
    run_speech_loop,
)
from storymix.script import EMOTIONS, EmotionInstruction, TrackEntry


def mos(score01):
    return 1.0 + 4.0 * score01


def cosine(score01):
    return 2.0 * score01 - 1.0


def memory_store():
    assets = {}

    def put(audio):
        digest = hashlib.sha256(audio.samples.tobytes()).hexdigest()[:16]
        assets[digest] = audio
        return digest

    put.assets = assets
    return put


def gateway_with(speech_schedule=None, align_schedule=None, text_script=None):
    gw = Gateway(sleeper=lambda s: None)
    gw.register_suite(MockSuite(
        speech_schedule=speech_schedule,
        align_schedule=align_schedule,
        text_script=text_script,
    ))
    return gw


@pytest.fixture
def line(two_char_dialogue):
    return two_char_dialogue.lines[0]


@pytest.fixture
def voice():
    from storymix.voices import VoiceEntry

    return VoiceEntry(voice_id="v007", audio_asset="tone://v007",
                      description="warm adult female, measured")


class TestSpeechLoop:
    def test_first_attempt_clears_gate(self, line, voice):
        gw = gateway_with(speech_schedule=[mos(0.9)])
        outcome = run_speech_loop(line, voice, LoopConfig(tau_speech=0.8), gw, memory_store())
        assert len(outcome.attempts) == 1
        assert outcome.stop_reason == "threshold_met"
        assert outcome.retained == 1

    def test_early_stop_on_second_attempt(self, line, voice):
        gw = gateway_with(speech_schedule=[mos(0.6), mos(0.9)])
        outcome = run_speech_loop(line, voice, LoopConfig(tau_speech=0.8, n_max=3), gw,
                                  memory_store())
        assert len(outcome.attempts) == 2
        assert outcome.retained == 2
        assert outcome.stop_reason == "threshold_met"

    def test_budget_exhausted_keeps_argmax(self, line, voice):
        gw = gateway_with(speech_schedule=[mos(0.5), mos(0.4), mos(0.45)])
        outcome = run_speech_loop(line, voice, LoopConfig(tau_speech=0.8, n_max=3), gw,
                                  memory_store())
        assert len(outcome.attempts) == 3
        assert outcome.stop_reason == "budget_exhausted"
        assert outcome.retained == 1

    def test_tie_retains_earliest(self, line, voice):
        gw = gateway_with(speech_schedule=[mos(0.5), mos(0.5), mos(0.5)])
        outcome = run_speech_loop(line, voice, LoopConfig(tau_speech=0.8, n_max=3), gw,
                                  memory_store())
        assert outcome.retained == 1

    def test_emotion_refined_between_attempts(self, line, voice):
        gw = gateway_with(speech_schedule=[mos(0.2), mos(0.9)])
        outcome = run_speech_loop(line, voice, LoopConfig(tau_speech=0.8, n_max=3), gw,
                                  memory_store())
        w1 = outcome.attempts[0].request["emotion_weights"]
        w2 = outcome.attempts[1].request["emotion_weights"]
        assert w1 == list(line.emotion.weights)
        assert w2 == list(refine_emotion(line.emotion, "").weights)
        assert w1 != w2

    def test_final_attempt_meeting_gate_reports_threshold_met(self, line, voice):
        gw = gateway_with(speech_schedule=[mos(0.2), mos(0.3), mos(0.85)])
        outcome = run_speech_loop(line, voice, LoopConfig(tau_speech=0.8, n_max=3), gw,
                                  memory_store())
        assert len(outcome.attempts) == 3
        assert outcome.stop_reason == "threshold_met"

    def test_critic_failure_scores_zero(self, line, voice, caplog):
        gw = Gateway(sleeper=lambda s: None)
        suite = MockSuite()

        class DeadCritic:
            backend_id = "dead-critic"

            def handle(self, request):
                raise TransportError("no critic today")

        gw.register_suite(suite)
        from storymix.backends import BackendDescriptor

        gw.register(BackendDescriptor(backend_id="dead-critic", capability="speech_critic",
                                      max_retries=0), DeadCritic())
        with caplog.at_level("WARNING"):
            outcome = run_speech_loop(line, voice, LoopConfig(tau_speech=0.8, n_max=2), gw,
                                      memory_store())
        assert all(a.score == 0.0 for a in outcome.attempts)
        assert all(a.critique == "critic unavailable" for a in outcome.attempts)
        assert outcome.stop_reason == "budget_exhausted"

    def test_synthesis_failure_carries_completed_attempts(self, line, voice):
        gw = Gateway(sleeper=lambda s: None)
        suite = MockSuite(speech_schedule=[mos(0.1), mos(0.1)])
        gw.register_suite(suite)

        calls = {"n": 0}

        class FlakyTts:
            backend_id = "flaky-tts"

            def handle(self, request):
                calls["n"] += 1
                if calls["n"] >= 2:
                    raise TransportError("tts down")
                return suite.tts.handle(request)

        from storymix.backends import BackendDescriptor

        gw.register(BackendDescriptor(backend_id="flaky-tts", capability="tts", max_retries=0),
                    FlakyTts())
        with pytest.raises(LoopError) as err:
            run_speech_loop(line, voice, LoopConfig(tau_speech=0.9, n_max=3), gw, memory_store())
        assert len(err.value.attempts) == 1

    def test_loop_purity_under_scripted_critics(self, line, voice):
        def run():
            gw = gateway_with(speech_schedule=[mos(0.3), mos(0.5), mos(0.4)])
            return run_speech_loop(line, voice, LoopConfig(tau_speech=0.8, n_max=3), gw,
                                   memory_store())

        assert run() == run()


class TestNonSpeechLoop:
    def _entry(self, kind="sfx"):
        return TrackEntry(entry_id="fx042", kind=kind, start_time=1.0, duration=1.5,
                          description="rain on a tin roof")

    def test_single_attempt_early_stop(self):
        gw = gateway_with(align_schedule=[cosine(0.95)])
        outcome = run_nonspeech_loop(self._entry(), LoopConfig(tau_ns=0.6), gw, memory_store())
        assert len(outcome.attempts) == 1
        assert outcome.stop_reason == "threshold_met"

    def test_first_failure_bumps_seed(self):
        gw = gateway_with(align_schedule=[cosine(0.3), cosine(0.7)])
        outcome = run_nonspeech_loop(self._entry(), LoopConfig(tau_ns=0.6, n_max=3), gw,
                                     memory_store())
        seed0 = derive_seed("fx042")
        assert outcome.attempts[0].seed == seed0
        assert outcome.attempts[1].seed == seed0 + 1
        assert outcome.retained == 2

    def test_second_failure_rewrites_prompt_once(self):
        gw = gateway_with(align_schedule=[cosine(0.2), cosine(0.3), cosine(0.25)])
        outcome = run_nonspeech_loop(self._entry(), LoopConfig(tau_ns=0.6, n_max=3), gw,
                                     memory_store())
        descriptions = [a.request["description"] for a in outcome.attempts]
        assert descriptions[0] == descriptions[1] == "rain on a tin roof"
        assert descriptions[2] != "rain on a tin roof"
        assert descriptions[2].startswith("rain on a tin roof")
        assert outcome.retained == 2
        assert outcome.stop_reason == "budget_exhausted"

    def test_bgm_kind_uses_bgm_backend(self):
        gw = gateway_with(align_schedule=[cosine(0.9)])
        entry = TrackEntry(entry_id="bg007", kind="bgm", start_time=0.0, duration=4.0,
                           description="somber cello theme")
        run_nonspeech_loop(entry, LoopConfig(), gw, memory_store())
        assert gw.invocation_counts()["bgm"] == 1
        assert "sfx" not in gw.invocation_counts()

    def test_speech_entry_rejected(self):
        entry = TrackEntry(entry_id="sp1", kind="speech", start_time=0.0, duration=1.0,
                           line_id="L1")
        with pytest.raises(ValueError):
            run_nonspeech_loop(entry, LoopConfig(), gateway_with(), memory_store())


class TestRefineEmotion:
    def test_pure_neutral_is_fixed_point(self):
        e = EmotionInstruction.neutral()
        assert refine_emotion(e, "") == e

    def test_full_anger_damped(self):
        e = EmotionInstruction.single("anger")
        out = refine_emotion(e, "")
        assert out.weights[EMOTIONS.index("anger")] == pytest.approx(0.8)
        assert out.weights[EMOTIONS.index("neutral")] == pytest.approx(0.2)

    def test_tie_broken_by_basis_order(self):
        e = EmotionInstruction.from_mapping({"fear": 0.5, "sadness": 0.5})
        out = refine_emotion(e, "")
        assert out.weights[EMOTIONS.index("fear")] == pytest.approx(0.4)
        assert out.weights[EMOTIONS.index("sadness")] == pytest.approx(0.5)
        assert out.weights[EMOTIONS.index("neutral")] == pytest.approx(0.1)
        assert abs(sum(out.weights) - 1.0) <= 1e-6

    def test_backend_policy_uses_model_weights(self):
        gw = gateway_with(text_script={"refine_emotion": ["[0.1, 0, 0, 0, 0.4, 0, 0.5]"]})
        e = EmotionInstruction.single("anger")
        out = refine_emotion(e, "too harsh", policy="backend_llm", gateway=gw)
        assert out.weights[EMOTIONS.index("sadness")] == pytest.approx(0.4)

    def test_backend_policy_falls_back_on_garbage(self):
        gw = gateway_with(text_script={"refine_emotion": ["not json at all"]})
        e = EmotionInstruction.single("anger")
        out = refine_emotion(e, "", policy="backend_llm", gateway=gw)
        assert out == refine_emotion(e, "")


def simulate_loop(schedule01, tau, n_max):
    """Brute-force reference: replay the generate/score/gate recipe directly."""
    scores = []
    for n, s in enumerate(schedule01[:n_max], start=1):
        scores.append(s)
        if s >= tau:
            break
    best = max(range(len(scores)), key=lambda i: (scores[i], -i)) + 1
    stop = "threshold_met" if scores[-1] >= tau else "budget_exhausted"
    return len(scores), best, stop


@pytest.mark.parametrize("schedule,tau,n_max", [
    ([0.9], 0.8, 3),
    ([0.6, 0.9], 0.8, 3),
    ([0.5, 0.4, 0.45], 0.8, 3),
    ([0.5, 0.5, 0.5], 0.8, 3),
    ([0.2, 0.9, 0.1], 0.85, 2),
    ([0.625], 0.625, 3),
])
def test_loop_matches_reference_simulation(schedule, tau, n_max, two_char_dialogue, voice):
    gw = gateway_with(speech_schedule=[mos(s) for s in schedule])
    outcome = run_speech_loop(two_char_dialogue.lines[0], voice,
                              LoopConfig(tau_speech=tau, n_max=n_max), gw, memory_store())
    n_attempts, retained, stop = simulate_loop(schedule, tau, n_max)
    assert len(outcome.attempts) == n_attempts
    assert outcome.retained == retained
    assert outcome.stop_reason == stop


def test_outcome_round_trips_through_dict(line, voice):
    gw = gateway_with(speech_schedule=[mos(0.4), mos(0.9)])
    outcome = run_speech_loop(line, voice, LoopConfig(tau_speech=0.8), gw, memory_store())
    assert LoopOutcome.from_dict(outcome.to_dict()) == outcome
