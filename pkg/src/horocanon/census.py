"""End-to-end census: enumerate, hyperbolize, canonize, and collapse by manifold.

Database format (plain text)::

    # horocanon census v1 n=<n>
    <canonical_sig>\t<iso_sig>[,<iso_sig>...]\t<status>\t<n_cusps>\t<volume>

Geometric triangulations sharing a canonical signature are one manifold and
share one line.  Missing fields are written as ``-``.
"""

from __future__ import annotations

import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .canonical import canonize
from .enumeration import DEFAULT_CEILING, EnumerationFilter, enumerate_pairings
from .errors import (DegenerateSolution, HorocanonError, IterationCap,
                     NoConvergence, Stuck)
from .gluing import assemble_equations, solve, total_volume
from .isosig import decode_signature, iso_signature

log = logging.getLogger(__name__)

HEADER = "# horocanon census v1 n={n}"

GEOMETRIC = "GEOMETRIC"
DEGENERATE = "DEGENERATE"
UNDECIDED = "UNDECIDED"
STUCK = "STUCK"


@dataclass(frozen=True)
class CensusRecord:
    iso_signature: str
    status: str
    n_cusps: int
    volume: float = None
    canonical_signature: str = None
    shapes: tuple = None

    @property
    def volume_text(self):
        return "-" if self.volume is None else f"{self.volume:.10f}"


def process_candidate(T):
    """Run the pipeline on one triangulation; failures become statuses, never exceptions."""
    sig = iso_signature(T)
    cusps = T.n_vertices
    try:
        sa = solve(assemble_equations(T))
    except DegenerateSolution:
        return CensusRecord(sig, DEGENERATE, cusps)
    except (NoConvergence, HorocanonError) as exc:
        log.debug("%s: %s", sig, exc)
        return CensusRecord(sig, UNDECIDED, cusps)
    try:
        D = canonize(T, sa.z)
    except Stuck:
        return CensusRecord(sig, STUCK, cusps)
    except (IterationCap, HorocanonError) as exc:
        log.debug("%s: %s", sig, exc)
        return CensusRecord(sig, UNDECIDED, cusps)
    vol = total_volume(T, sa.z)
    return CensusRecord(sig, GEOMETRIC, cusps, vol, D.signature, sa.z)


def _process_sig(sig):
    return process_candidate(decode_signature(sig))


def candidates(n, ceiling=DEFAULT_CEILING, workers=1):
    """Cusped candidates with 1..n tetrahedra."""
    out = []
    for k in range(1, n + 1):
        out.extend(enumerate_pairings(k, EnumerationFilter("cusped", max_n=ceiling), workers=workers))
    return out


def run_census(n, threads=1, ceiling=DEFAULT_CEILING):
    """Records for every cusped candidate with at most ``n`` tetrahedra, sorted by signature."""
    cands = candidates(n, ceiling, workers=threads)
    sigs = sorted(iso_signature(T) for T in cands)
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            records = list(pool.map(_process_sig, sigs, chunksize=4))
    else:
        records = [_process_sig(s) for s in sigs]
    return sorted(records, key=lambda r: r.iso_signature)


def collapse(records):
    """Database lines: one per manifold for geometric records, one per triangulation otherwise."""
    groups = {}
    rows = []
    for r in records:
        if r.status == GEOMETRIC:
            groups.setdefault(r.canonical_signature, []).append(r)
        else:
            rows.append(("-", r.iso_signature, r.status, str(r.n_cusps), "-"))
    for csig, rs in groups.items():
        rs = sorted(rs, key=lambda r: r.iso_signature)
        iso = ",".join(r.iso_signature for r in rs)
        rows.append((csig, iso, GEOMETRIC, str(rs[0].n_cusps), rs[0].volume_text))
    rows.sort(key=lambda row: (row[0], row[1]))
    return rows


def format_db(records, n):
    lines = [HEADER.format(n=n)]
    lines.extend("\t".join(row) for row in collapse(records))
    return "\n".join(lines) + "\n"


def write_db(records, n, path):
    text = format_db(records, n)
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(text)
    return text


def read_db(path):
    """Parse a database file into ``(n, rows)``; each row is a dict of the five fields."""
    with open(path, encoding="ascii") as fh:
        lines = fh.read().splitlines()
    if not lines or not lines[0].startswith("# horocanon census v1 n="):
        raise ValueError(f"{path}: missing census header")
    n = int(lines[0].rsplit("=", 1)[1])
    rows = []
    for line in lines[1:]:
        csig, iso, status, cusps, vol = line.split("\t")
        rows.append({
            "canonical_signature": None if csig == "-" else csig,
            "iso_signatures": iso.split(","),
            "status": status,
            "n_cusps": int(cusps),
            "volume": None if vol == "-" else float(vol),
        })
    return n, rows
