"""Writes triangulation fixtures and reference metadata using Regina.

Usage: python3 tools/gen_fixtures.py [output-dir]
"""

import json
import sys
from pathlib import Path

import regina


def sfs(*fibres):
    space = regina.SFSpace()
    for alpha, beta in fibres:
        space.insertFibre(alpha, beta)
    tri = space.construct()
    tri.intelligentSimplify()
    return tri


def lens_two_vertex(p, q):
    tri = regina.Example3.lens(p, q)
    tri.pachner(tri.tetrahedron(0))
    return tri


FIXTURES = [
    ("sigma237", lambda: sfs((2, -1), (3, 1), (7, 1)), "Seifert fibred homology sphere over S^2(2,3,7)", [2, 3, 7]),
    ("poincare", regina.Example3.poincare, "Poincare homology sphere", [2, 3, 5]),
    ("lens7_2", lambda: regina.Example3.lens(7, 2), "L(7,2)", None),
    ("lens5_1", lambda: regina.Example3.lens(5, 1), "L(5,1)", None),
    ("lens5_1_two_vertex", lambda: lens_two_vertex(5, 1), "L(5,1) after a 1-4 move", None),
    ("sfs_z_z2_z2", lambda: sfs((2, 1), (2, 1), (2, -1), (2, -1)), "SFS over S^2 with four (2,+-1) fibres", None),
    ("prism_222", lambda: sfs((2, 1), (2, 1), (2, 1)), "SFS over S^2(2,2,2)", [2, 2, 2]),
    ("rp2xs1", regina.Example3.rp2xs1, "RP^2 x S^1", None),
    ("twisted_s2xs1", regina.Example3.twistedSphereBundle, "non-orientable S^2 bundle over S^1", None),
    ("figure8_ideal", regina.Example3.figureEight, "ideal figure-eight knot complement", None),
]


def gluing_text(tri, comment):
    lines = [f"# {comment}", f"t={tri.size()}"]
    for i in range(tri.size()):
        tet = tri.tetrahedron(i)
        for f in range(4):
            adj = tet.adjacentTetrahedron(f)
            if adj is None:
                raise ValueError(f"{comment}: tetrahedron {i} face {f} is unglued")
            perm = tet.adjacentGluing(f)
            j, g = adj.index(), perm[f]
            if (i, f) < (j, g):
                images = "".join(str(perm[v]) for v in range(4))
                lines.append(f"{i}:{f} -> {j}:{g} perm={images}")
    return "\n".join(lines) + "\n"


def homology(tri):
    h = tri.homology()
    return {
        "free_rank": h.rank(),
        "torsion": [int(str(h.invariantFactor(k))) for k in range(h.countInvariantFactors())],
        "text": str(h),
    }


def metadata(name, tri, comment, base):
    links = []
    for v in tri.vertices():
        link = v.buildLink()
        links.append(link.eulerChar())
    return {
        "name": name,
        "file": f"{name}.tri",
        "description": comment,
        "tetrahedra": tri.size(),
        "vertices": tri.countVertices(),
        "edges": tri.countEdges(),
        "faces": tri.countTriangles(),
        "orientable": tri.isOrientable(),
        "closed": tri.isClosed(),
        "valid": tri.isValid(),
        "vertex_link_euler": links,
        "h1": homology(tri),
        "iso_sig": tri.isoSig(),
        "base": base,
    }


def main():
    out = Path(sys.argv[1] if len(sys.argv) > 1 else "crates/core/tests/fixtures")
    out.mkdir(parents=True, exist_ok=True)
    manifest = []
    for name, make, comment, base in FIXTURES:
        tri = make()
        (out / f"{name}.tri").write_text(gluing_text(tri, comment))
        manifest.append(metadata(name, tri, comment, base))
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")


if __name__ == "__main__":
    main()
