"""moodtunes: emotion-adaptive local music player.

Webcam frames come in on a fixed cadence, facial emotions are classified and
aggregated into a dominant mood, and a mood-mapped looping playlist state
machine drives playback - with manual override always available.
"""

from .aggregation import (
    AggregationResult,
    AggregationStrategy,
    SmoothingWindow,
    aggregate,
    aggregate_highest_percentage,
    aggregate_most_frequent,
    dominant_per_face,
    smooth,
)
from .emotions import EMOTIONS, EmotionDistribution
from .frame_pipeline import (
    FaceReading,
    FaceRegion,
    FrameReading,
    FrameSubmission,
    RasterImage,
    analyze_frame,
    classify_emotions,
    decode_frame,
    detect_faces,
)
from .metrics import MetricsRegistry, TimingSummary
from .mood_mapping import MoodConfig, load_mood_config, map_emotion
from .playlist_engine import (
    Library,
    PlayerEngine,
    PlayerState,
    Playlist,
    Track,
    scan_library,
)

__version__ = "0.1.0"
