"""SCX / SCX-M text formats and the built-in corpus.

SCX is one declaration per line, ``#`` comments allowed:

    ambient <p>
    vertex <id> <q_1> ... <q_p>        coordinates as `num/den` or integers
    simplex <id_1> ... <id_k>
    subcomplex <name> <simplex-name> ...   simplex names use dashes: a-b-c

SCX-M extends SCX with per-vertex images and per-simplex carriers:

    image <vertex-id> <q_1> ... <q_p>
    carrier <fine-simplex-name> -> <coarse-simplex-name>

Emission is canonical (sorted declarations, reduced fractions), so content
digests are stable across runs.
"""

from __future__ import annotations

import hashlib
import os
from fractions import Fraction
from importlib import resources

from .complexes import Complex, Point, Simplex, simplex, sname, validate
from .errors import FormatError
from .linalg import vec


def _parse_coord(tok: str) -> Fraction:
    try:
        return Fraction(tok)
    except ValueError as exc:
        raise FormatError(f"bad coordinate {tok!r}") from exc


def parse_simplex_name(tok: str) -> Simplex:
    return simplex(tok.split("-"))


def coord_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def parse_scx(text: str):
    """Parse SCX (and SCX-M) text into raw pieces."""
    ambient = None
    vertices: dict[str, tuple[Fraction, ...]] = {}
    simplices: list[list[str]] = []
    subcomplexes: dict[str, list[Simplex]] = {}
    images: dict[str, tuple[Fraction, ...]] = {}
    carriers: dict[Simplex, Simplex] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        kind = toks[0]
        try:
            if kind == "ambient":
                ambient = int(toks[1])
            elif kind == "vertex":
                vertices[toks[1]] = tuple(_parse_coord(t) for t in toks[2:])
            elif kind == "simplex":
                simplices.append(toks[1:])
            elif kind == "subcomplex":
                subcomplexes[toks[1]] = [parse_simplex_name(t) for t in toks[2:]]
            elif kind == "image":
                images[toks[1]] = tuple(_parse_coord(t) for t in toks[2:])
            elif kind == "carrier":
                if toks[2] != "->":
                    raise FormatError("carrier syntax: carrier <fine> -> <coarse>")
                carriers[parse_simplex_name(toks[1])] = parse_simplex_name(toks[3])
            else:
                raise FormatError(f"unknown declaration {kind!r}")
        except (IndexError, ValueError) as exc:
            raise FormatError(f"line {lineno}: {raw.strip()!r}: {exc}") from exc
    if ambient is None:
        raise FormatError("missing 'ambient' declaration")
    return ambient, vertices, simplices, subcomplexes, images, carriers


def load_complex(text: str, check_disjoint: bool = True):
    """SCX text -> (Complex, named subcomplexes)."""
    ambient, vertices, simplices, subcomplexes, images, carriers = parse_scx(text)
    if images or carriers:
        raise FormatError("SCX-M declarations in plain SCX input")
    K = validate(ambient, vertices, simplices, check_disjoint=check_disjoint)
    subs = {name: K.subcomplex(members) for name, members in subcomplexes.items()}
    return K, subs


def emit_scx(K: Complex, subcomplexes: dict | None = None) -> str:
    lines = [f"ambient {K.ambient_dim}"]
    used = sorted({v for s in K.simplices for v in s})
    for v in used:
        coords = " ".join(coord_str(q) for q in K.vertices[v])
        lines.append(f"vertex {v} {coords}")
    for s in sorted(K.simplices, key=lambda s: (len(s), s)):
        lines.append("simplex " + " ".join(s))
    for name in sorted(subcomplexes or {}):
        members = subcomplexes[name]
        members = getattr(members, "members", members)
        names = " ".join(sname(m) for m in sorted(members, key=lambda s: (len(s), s)))
        lines.append(f"subcomplex {name} {names}")
    return "\n".join(lines) + "\n"


def emit_scxm(fine: Complex, images: dict[str, Point],
              carriers: dict[Simplex, Simplex]) -> str:
    lines = [emit_scx(fine).rstrip("\n")]
    for v in sorted(images):
        coords = " ".join(coord_str(q) for q in images[v])
        lines.append(f"image {v} {coords}")
    for s in sorted(carriers, key=lambda s: (len(s), s)):
        lines.append(f"carrier {sname(s)} -> {sname(carriers[s])}")
    return "\n".join(lines) + "\n"


def load_scxm(text: str, check_disjoint: bool = False):
    """SCX-M text -> (fine Complex, vertex images, carriers)."""
    ambient, vertices, simplices, subcomplexes, images, carriers = parse_scx(text)
    fine = validate(ambient, vertices, simplices, check_disjoint=check_disjoint)
    images = {v: vec(p) for v, p in images.items()}
    return fine, images, carriers


def digest(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def complex_digest(K: Complex) -> str:
    return digest(emit_scx(K))


# ---------------------------------------------------------------------------
# Corpus
# ---------------------------------------------------------------------------

CORPUS_NAMES = ["cube1", "cube2", "disk", "rp6", "s2", "torus7", "tri3", "wedge2"]


def corpus_text(name: str) -> str:
    override = os.environ.get("PLHTPY_CORPUS")
    if override:
        path = os.path.join(override, name + ".scx")
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    ref = resources.files("plhtpy").joinpath("corpus").joinpath(name + ".scx")
    return ref.read_text(encoding="utf-8")


def load_corpus(name: str, check_disjoint: bool = True):
    if name not in CORPUS_NAMES and not os.environ.get("PLHTPY_CORPUS"):
        raise FormatError(f"unknown corpus complex {name!r}; have {CORPUS_NAMES}")
    return load_complex(corpus_text(name), check_disjoint=check_disjoint)
