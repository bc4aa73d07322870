"""
Layout of the CSV result and record files.

Every file starts with `# key=value` metadata lines; the first one holds
the generation timestamp, so two runs with the same seed differ only there.
"""
from datetime import datetime, timezone

FLOAT_FORMAT = "%.17g"
FLAG_SEPARATOR = "|"
COMMENT = "#"

STREAM_COLUMNS = ["t_mid", "amplitude", "phase", "freq", "rocof", "flags", "nrmse_ppm"]
REFERENCE_COLUMNS = ["t", "freq", "rocof"]
CDF_COLUMNS = ["x", "F"]
TRAJECTORY_COLUMNS = ["t", "freq", "served_mw", "shed_mw"]
EVENT_COLUMNS = ["t", "kind", "mw"]
SPECTROGRAM_COLUMNS = ["t", "f", "magnitude"]
WAVEFORM_KEYS = ("fs", "unit", "t0", "seed")


def header_lines(metadata: dict[str, str], generated: datetime | None = None) -> str:
    """
    Metadata block written above the table.

    Parameters
    ----------
    metadata : dict[str, str]
        Resolved configuration pairs
    generated : datetime | None
        Generation time, now in UTC by default

    Returns
    ----------
    str
        Newline-terminated comment lines
    """
    generated = generated or datetime.now(timezone.utc)
    lines = [f"{COMMENT} generated={generated.isoformat(timespec='seconds')}"]
    lines += [f"{COMMENT} {key}={value}" for key, value in metadata.items()]
    return "\n".join(lines) + "\n"


def waveform_header(fs: float, unit: str, t0: float, seed: int | None) -> str:
    seed_text = "none" if seed is None else str(seed)
    return f"{COMMENT} fs={fs!r} unit={unit} t0={t0!r} seed={seed_text}\n"


def parse_pairs(line: str) -> dict[str, str]:
    """
    Split a comment line into key=value pairs separated by blanks.
    Tokens without '=' are ignored.
    """
    body = line.lstrip(COMMENT).strip()
    pairs = {}
    for token in body.split():
        key, sep, value = token.partition("=")
        if sep:
            pairs[key] = value
    return pairs
