import pytest
from hypothesis import given
from hypothesis import strategies as st

from moodtunes.emotions import EMOTIONS
from moodtunes.mood_mapping import (
    DEFAULT_EMOTION_TO_MOOD,
    DEFAULT_MOODS,
    ConfigInvalid,
    MoodConfig,
    default_mood_config,
    load_mood_config,
    map_emotion,
)


def test_empty_document_yields_defaults():
    assert load_mood_config("") == default_mood_config()
    assert load_mood_config(None) == default_mood_config()


def test_default_mapping_entries():
    config = default_mood_config()
    assert map_emotion(config, "happy") == "happy"
    assert map_emotion(config, "neutral") == "calm"
    assert map_emotion(config, "disgust") == "angry"
    assert map_emotion(config, "surprise") == "happy"
    assert map_emotion(config, "fear") == "sad"


def test_override_resolves_to_target_playlist():
    config = load_mood_config("emotion_to_mood:\n  surprise: sad\n")
    assert map_emotion(config, "surprise") == "sad"
    assert config.mood_to_playlist["sad"] == "sad"
    # untouched entries fall back to defaults
    assert map_emotion(config, "happy") == "happy"


def test_new_mood_without_playlist_is_invalid():
    with pytest.raises(ConfigInvalid):
        load_mood_config("emotion_to_mood:\n  happy: party\n")


def test_new_mood_with_declared_playlist_is_valid():
    config = load_mood_config(
        "emotion_to_mood:\n  happy: party\nmood_to_playlist:\n  party: party\n"
    )
    assert map_emotion(config, "happy") == "party"
    assert config.mood_to_playlist["party"] == "party"


def test_unknown_emotion_label_is_invalid():
    with pytest.raises(ConfigInvalid):
        load_mood_config("emotion_to_mood:\n  ecstatic: happy\n")


def test_non_mapping_document_is_invalid():
    with pytest.raises(ConfigInvalid):
        load_mood_config("- just\n- a\n- list\n")


def test_config_from_path(tmp_path):
    doc = tmp_path / "moods.yml"
    doc.write_text("emotion_to_mood:\n  fear: angry\n")
    assert map_emotion(load_mood_config(doc), "fear") == "angry"


def test_manual_only_moods_are_allowed():
    config = load_mood_config("mood_to_playlist:\n  focus: deep-focus\n")
    assert "focus" not in set(config.emotion_to_mood.values())
    assert config.mood_to_playlist["focus"] == "deep-focus"


def test_constructor_enforces_totality():
    partial = {k: v for k, v in DEFAULT_EMOTION_TO_MOOD.items() if k != "fear"}
    with pytest.raises(ConfigInvalid):
        MoodConfig(emotion_to_mood=partial)


def test_constructor_enforces_playlist_reference():
    with pytest.raises(ConfigInvalid):
        MoodConfig(mood_to_playlist={"happy": "happy"})  # sad/angry/calm dangle


@given(st.sampled_from(EMOTIONS))
def test_map_emotion_total_over_default_config(label):
    assert map_emotion(default_mood_config(), label) in DEFAULT_MOODS


@given(
    st.fixed_dictionaries({label: st.sampled_from(DEFAULT_MOODS) for label in EMOTIONS})
)
def test_map_emotion_total_for_any_valid_config(mapping):
    config = MoodConfig(emotion_to_mood=mapping)
    for label in EMOTIONS:
        assert map_emotion(config, label) == mapping[label]


def test_default_config_has_no_unreachable_moods():
    config = default_mood_config()
    reachable = set(config.emotion_to_mood.values())
    assert reachable == set(DEFAULT_MOODS)


def test_map_emotion_rejects_foreign_label():
    with pytest.raises(ValueError):
        map_emotion(default_mood_config(), "bored")
