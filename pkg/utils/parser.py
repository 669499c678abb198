"""Reading and writing presentation files."""
import hashlib
import logging
from typing import Dict, Optional

from utils.errors import InvalidPresentation, PresentationSyntaxError
from utils.presentation import CORNER_CLASSES, Presentation, Vector, make_presentation, validate

logger = logging.getLogger(__name__)

HEADER = "netmap-presentation v1"
VECTOR_KEYS = ("lambda1", "lambda2", "translation")
GREEN_KEYS = tuple(f"green {label}" for label in CORNER_CLASSES)


def _parse_vector(value: str, key: str, line_no: int) -> Vector:
    parts = value.split()
    if len(parts) != 2:
        raise PresentationSyntaxError(f"{key} expects two integers, got {value!r}", line_no)
    try:
        return int(parts[0]), int(parts[1])
    except ValueError:
        raise PresentationSyntaxError(f"{key} expects two integers, got {value!r}", line_no) from None


def parse_presentation(text: str, check: bool = True) -> Presentation:
    """
    Parse the line-oriented presentation format.
    Args:
        text: file contents; '#' starts a comment
        check: raise InvalidPresentation when validate reports violations
    Returns:
        The parsed presentation
    """
    lines = text.splitlines()
    seen_header = False
    values: Dict[str, Optional[Vector]] = {}
    for line_no, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if not seen_header:
            if line != HEADER:
                raise PresentationSyntaxError(f"expected header {HEADER!r}, got {line!r}", line_no)
            seen_header = True
            continue
        if ":" not in line:
            raise PresentationSyntaxError(f"expected 'key: value', got {line!r}", line_no)
        key, value = (part.strip() for part in line.split(":", 1))
        key = " ".join(key.split())
        if key not in VECTOR_KEYS and key not in GREEN_KEYS:
            raise PresentationSyntaxError(f"unknown key {key!r}", line_no)
        if key in values:
            raise PresentationSyntaxError(f"duplicate key {key!r}", line_no)
        if key in GREEN_KEYS and value.lower() == "trivial":
            values[key] = None
        else:
            values[key] = _parse_vector(value, key, line_no)

    if not seen_header:
        raise PresentationSyntaxError(f"missing header {HEADER!r}", len(lines) or 1)
    for key in VECTOR_KEYS + GREEN_KEYS:
        if key not in values:
            raise PresentationSyntaxError(f"missing line {key!r}", len(lines))

    pres = make_presentation(
        values["lambda1"], values["lambda2"], values["translation"],
        {label: values[f"green {label}"] for label in CORNER_CLASSES},
    )
    if check:
        violations = validate(pres)
        if violations:
            for violation in violations:
                logger.info("presentation violation %s", violation)
            raise InvalidPresentation(violations)
    return pres


def serialize_presentation(pres: Presentation) -> str:
    lines = [
        HEADER,
        f"lambda1: {pres.lambda1[0]} {pres.lambda1[1]}",
        f"lambda2: {pres.lambda2[0]} {pres.lambda2[1]}",
        f"translation: {pres.translation[0]} {pres.translation[1]}",
    ]
    for label in CORNER_CLASSES:
        far = pres.green(label)
        lines.append(f"green {label}: trivial" if far is None else f"green {label}: {far[0]} {far[1]}")
    return "\n".join(lines) + "\n"


def load_presentation(filepath: str, check: bool = True) -> Presentation:
    with open(filepath, "r", encoding="utf-8") as f:
        return parse_presentation(f.read(), check=check)


def save_presentation(pres: Presentation, filepath: str) -> str:
    with open(filepath, "w", encoding="utf-8") as f:
        f.write(serialize_presentation(pres))
    return filepath


def presentation_digest(pres: Presentation) -> str:
    return hashlib.sha256(serialize_presentation(pres).encode("utf-8")).hexdigest()
