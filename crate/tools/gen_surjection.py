"""Writes a surjection file from a triangulation's presentation onto T(2,3,7).

Regina simplifies the presentation to two generators a, b and reports each
original generator as a word in them; a and b are then sent to words in x, y.

Usage: lenscert pi1 TRI | python3 tools/gen_surjection.py A_WORD B_WORD > OUT
e.g.   ... | python3 tools/gen_surjection.py "y" "x y x y x y"
"""

import re
import sys

import regina


def read_presentation(text):
    lines = text.strip().splitlines()
    header = lines[0].split()
    assert header[0] == "gens"
    names = header[2:]
    relators = []
    for line in lines[1:]:
        word = []
        for token in line.split()[1:]:
            m = re.fullmatch(r"(\w+)(\^-1)?", token)
            word.append((names.index(m.group(1)), -1 if m.group(2) else 1))
        relators.append(word)
    return names, relators


def regina_word(word):
    return "".join(chr(ord("a") + k).upper() if e < 0 else chr(ord("a") + k) for k, e in word)


def parse_images(hom_text, count):
    """'Isomorphism: g0 -> g0^-3, g1 -> g0^2 g1, ...' as lists of (gen, exp)."""
    body = hom_text.split(":", 1)[1]
    images = {}
    for part in re.findall(r"g(\d+) -> ([^,]*)", body):
        target = []
        for gen, exp in re.findall(r"g(\d+)(?:\^(-?\d+))?", part[1]):
            target.append((int(gen), int(exp) if exp else 1))
        images[int(part[0])] = target
    return [images[k] for k in range(count)]


def main():
    a_word, b_word = sys.argv[1], sys.argv[2]
    names, relators = read_presentation(sys.stdin.read())
    group = regina.GroupPresentation(len(names), [regina_word(r) for r in relators])
    hom = group.intelligentSimplify()
    if group.countGenerators() != 2:
        sys.exit(f"simplified to {group.countGenerators()} generators, expected 2")
    images = parse_images(str(hom), len(names))
    sys.stderr.write(f"simplified: {group}\n")
    targets = [a_word.split(), b_word.split()]

    def inverse(word):
        flip = {"x": "x^-1", "y": "y^-1", "x^-1": "x", "y^-1": "y"}
        return [flip[t] for t in reversed(word)]

    for name, image in zip(names, images):
        out = []
        for gen, exp in image:
            piece = targets[gen] if exp > 0 else inverse(targets[gen])
            out.extend(piece * abs(exp))
        print(f"gen {name} -> {' '.join(out) if out else '1'}")


if __name__ == "__main__":
    main()
