"""JSON design-spec documents.

Every length is in metres, every frequency in hertz. Unknown keys are
rejected so a misspelt parameter can never be silently ignored.
"""
import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional

import jsonschema

from .array import ArraySpec
from .cavity import SiwCavitySpec
from .coax import CoaxCavitySpec
from .coupling import BandMap, CouplingMatrix, get_preset
from .errors import FiltennaError, SpecError
from .perturb import PostSpec


def schema():
    text = resources.files("siwfiltenna").joinpath("design_schema.json").read_text()
    return json.loads(text)


@dataclass
class DesignSpecDoc:
    cavity: Optional[SiwCavitySpec] = None
    coax: Optional[CoaxCavitySpec] = None
    posts: list = field(default_factory=list)
    matrix: Optional[CouplingMatrix] = None
    band: Optional[BandMap] = None
    array: Optional[ArraySpec] = None


def _build(section, fn):
    try:
        return fn()
    except FiltennaError as exc:
        raise SpecError(f"{section}: {exc}") from exc


def parse_design(doc: dict) -> DesignSpecDoc:
    validator = jsonschema.Draft202012Validator(schema())
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        e = errors[0]
        where = "/".join(str(p) for p in e.absolute_path) or "<root>"
        raise SpecError(f"{where}: {e.message}")

    out = DesignSpecDoc()
    if "cavity" in doc:
        out.cavity = _build("cavity", lambda: SiwCavitySpec(**doc["cavity"]))
    if "coax" in doc:
        if out.cavity is None:
            raise SpecError("coax: requires a cavity section")
        out.coax = _build("coax", lambda: CoaxCavitySpec(out.cavity, **doc["coax"]))
    for i, p in enumerate(doc.get("posts", [])):
        out.posts.append(_build(f"posts/{i}", lambda: PostSpec(**p)))
    if "coupling" in doc:
        c = doc["coupling"]
        if "preset" in c:
            preset = _build("coupling", lambda: get_preset(c["preset"]))
            out.matrix, out.band = preset.matrix, preset.band
        else:
            out.matrix = _build("coupling", lambda: CouplingMatrix(c["matrix"]))
    if "band" in doc:
        out.band = _build("band", lambda: BandMap(**doc["band"]))
    if "array" in doc:
        a = dict(doc["array"])
        if "weights" in a:
            a["weights"] = tuple(complex(re, im) for re, im in a["weights"])
        out.array = _build("array", lambda: ArraySpec(**a))
    return out


def load_design(path) -> DesignSpecDoc:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SpecError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    return parse_design(doc)
