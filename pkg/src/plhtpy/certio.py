"""JSON containers for maps, homeomorphisms, and homotopy certificates.

A map file embeds the SCX text of its domain and codomain, the SCX-M
text of its fine complex (with vertex images and target carriers), and
the domain-subdivision carrier lines.  Certificates bundle the shared
domain and codomain once plus one entry per straight-line step.  All
emission is canonical (sorted keys, sorted lines), so files and their
digests are byte-stable.
"""

from __future__ import annotations

import json

from . import scx
from .complexes import Complex, Simplex, sname
from .errors import FormatError
from .plmaps import HomotopyCertificate, HomotopyStep, PLMap
from .subdivision import PLHomeo, SubdivisionWitness

MAP_FORMAT = "plhtpy-map/1"
HOMEO_FORMAT = "plhtpy-homeo/1"
CERT_FORMAT = "plhtpy-cert/1"


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=1) + "\n"


def _carrier_lines(carrier: dict[Simplex, Simplex]) -> list[str]:
    return [f"{sname(s)} -> {sname(c)}"
            for s, c in sorted(carrier.items(), key=lambda kv: (len(kv[0]), kv[0]))]


def _parse_carrier_lines(lines) -> dict[Simplex, Simplex]:
    out = {}
    for line in lines:
        parts = line.split()
        if len(parts) != 3 or parts[1] != "->":
            raise FormatError(f"bad carrier line {line!r}")
        out[scx.parse_simplex_name(parts[0])] = scx.parse_simplex_name(parts[2])
    return out


def _expect(obj, fmt: str):
    if not isinstance(obj, dict) or obj.get("format") != fmt:
        raise FormatError(f"expected a {fmt} file")


# ---------------------------------------------------------------------------
# Maps
# ---------------------------------------------------------------------------

def _map_entry(f: PLMap) -> dict:
    return {"scxm": scx.emit_scxm(f.fine, f.vertex_image, f.target_carrier),
            "witness": _carrier_lines(f.dom_subdivision.carrier)}


def _load_map_entry(entry: dict, domain: Complex, codomain: Complex) -> PLMap:
    fine, images, carriers = scx.load_scxm(entry["scxm"])
    wit = SubdivisionWitness(fine, domain, _parse_carrier_lines(entry["witness"]))
    return PLMap(domain, codomain, wit, images, carriers)


def map_to_obj(f: PLMap, domain_subcomplexes: dict | None = None) -> dict:
    obj = {"format": MAP_FORMAT,
           "domain": scx.emit_scx(f.domain, domain_subcomplexes),
           "codomain": scx.emit_scx(f.codomain)}
    obj.update(_map_entry(f))
    return obj


def map_from_obj(obj: dict):
    """File object -> (PLMap, named subcomplexes of the domain)."""
    _expect(obj, MAP_FORMAT)
    domain, subs = scx.load_complex(obj["domain"], check_disjoint=False)
    codomain, _ = scx.load_complex(obj["codomain"], check_disjoint=False)
    return _load_map_entry(obj, domain, codomain), subs


# ---------------------------------------------------------------------------
# Homeomorphisms with normality data
# ---------------------------------------------------------------------------

def homeo_to_obj(phi: PLHomeo) -> dict:
    w = phi.witness
    return {"format": HOMEO_FORMAT,
            "complex": scx.emit_scx(w.coarse),
            "scxm": scx.emit_scxm(w.fine, phi.vertex_image, phi.target_carrier),
            "witness": _carrier_lines(w.carrier)}


def homeo_from_obj(obj: dict) -> PLHomeo:
    _expect(obj, HOMEO_FORMAT)
    coarse, _ = scx.load_complex(obj["complex"], check_disjoint=False)
    fine, images, carriers = scx.load_scxm(obj["scxm"])
    wit = SubdivisionWitness(fine, coarse, _parse_carrier_lines(obj["witness"]))
    return PLHomeo(wit, images, carriers)


# ---------------------------------------------------------------------------
# Homotopy certificates
# ---------------------------------------------------------------------------

def cert_to_obj(cert: HomotopyCertificate) -> dict:
    f0 = cert.initial
    steps = []
    for step in cert.steps:
        ref = step.refinement
        steps.append({
            "from": _map_entry(step.frm),
            "to": _map_entry(step.to),
            "refinement": {"scx": scx.emit_scx(ref.fine),
                           "witness": _carrier_lines(ref.carrier)},
            "carriers": _carrier_lines(step.carriers)})
    fixed = sorted(sname(s) for s in cert.fixed_set.members)
    return {"format": CERT_FORMAT,
            "domain": scx.emit_scx(f0.domain),
            "codomain": scx.emit_scx(f0.codomain),
            "fixed": fixed,
            "steps": steps}


def cert_from_obj(obj: dict) -> HomotopyCertificate:
    _expect(obj, CERT_FORMAT)
    domain, _ = scx.load_complex(obj["domain"], check_disjoint=False)
    codomain, _ = scx.load_complex(obj["codomain"], check_disjoint=False)
    steps = []
    for entry in obj["steps"]:
        frm = _load_map_entry(entry["from"], domain, codomain)
        to = _load_map_entry(entry["to"], domain, codomain)
        rfine, _, _ = scx.load_scxm(entry["refinement"]["scx"])
        ref = SubdivisionWitness(
            rfine, frm.fine, _parse_carrier_lines(entry["refinement"]["witness"]))
        steps.append(HomotopyStep(frm, to, ref,
                                  _parse_carrier_lines(entry["carriers"])))
    fixed = domain.subcomplex(scx.parse_simplex_name(n) for n in obj["fixed"])
    return HomotopyCertificate(steps, fixed)


# ---------------------------------------------------------------------------
# File helpers
# ---------------------------------------------------------------------------

_LOADERS = {MAP_FORMAT: map_from_obj,
            HOMEO_FORMAT: homeo_from_obj,
            CERT_FORMAT: cert_from_obj}


def save(path: str, obj: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(obj))


def load(path: str):
    """Load any container file; returns (format, decoded object)."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}: not valid JSON: {exc}") from exc
    fmt = obj.get("format") if isinstance(obj, dict) else None
    if fmt not in _LOADERS:
        raise FormatError(f"{path}: unknown container format {fmt!r}")
    return fmt, _LOADERS[fmt](obj)
