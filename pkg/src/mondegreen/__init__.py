"""mondegreen: lyric-transcript comparison and stereo separation toolkit.

The name is the word for a misheard lyric — which is what this package
measures. It parses ASR output (SRT subtitles or raw console logs), scores
hypothesis transcripts against reference lyrics with phoneme-aware edit
metrics, classifies errors as hallucinations or mishearings, picks per-line
winners between two hypotheses, and on the audio side splits stereo tracks
into vocal/instrumental estimates (center cancellation or FastICA) and
renders spectrograms.
"""

__version__ = "0.1.0"

from .audio import (
    AudioBuffer,
    MonoSignal,
    downmix,
    invert_phase,
    merge_channels,
    overlay,
    read_wav,
    split_channels,
    write_wav,
)
from .distances import (
    DEFAULT_PHONEME_PAIRS,
    Diff,
    DiffKind,
    alignment_cost,
    levenshtein,
    parse_phoneme_pairs,
    phoneme_adjusted_distance,
    word_diff,
)
from .errors import (
    AnnotationError,
    DegenerateInputError,
    MondegreenError,
    PairingError,
    SpectrumError,
    SubtitleParseError,
    WavFormatError,
)
from .judging import (
    Annotation,
    Classification,
    Kind,
    LineScore,
    PairResult,
    Reason,
    Source,
    Tally,
    Verdict,
    Winner,
    aggregate,
    build_report,
    classify_diff,
    decide_winner,
    evaluate_pairs,
    format_table,
    load_report_schema,
    parse_annotations,
    score_line,
)
from .separation import (
    Diagnostics,
    MixingEstimate,
    SeparationResult,
    cancel_center,
    fastica2,
    rescale_component,
    whiten,
)
from .spectrum import (
    SpectrogramGrid,
    SpectrumCurve,
    export_grid,
    frequency_analysis,
    spectrogram,
    stft,
)
from .subtitles import (
    Segment,
    Transcript,
    emit_srt,
    format_timestamp,
    parse_console_log,
    parse_reference,
    parse_srt,
    parse_timestamp,
)
from .textnorm import (
    LyricPair,
    NormalizedLine,
    PairingEntry,
    auto_pair,
    normalize,
    pair_lyrics,
    parse_pairing_spec,
)

__all__ = [name for name in dir() if not name.startswith("_")]
