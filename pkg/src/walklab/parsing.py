"""Text grammars for group specs, group elements, and step-law literals.

Group specs::

    Z            integers            C5           cyclic of order 5
    Z^3          rank-3 lattice      F2           free group of rank 2
    Dinf         infinite dihedral   BS(1,-1)     soluble Baumslag-Solitar
    S(3,2)       free solvable, rank 3, derived length 2
    wreath(C2, Dinf)                 restricted wreath product
    tower(Z^2; Z^2; Z^2)             iterated wreath, outermost lamp first,
                                     last entry is the base
    product(F2, wreath(C2, Dinf))    direct product

Elements (per spec):

* lattice / cyclic: ``3``, ``(1, -2)``; ``e`` is always the identity
* free groups and free solvable groups: words ``x1 X2 x3^-1 [x1,x2]``
  (``X i`` is the inverse of ``x i``)
* dihedral and Baumslag-Solitar: words in the generators ``a``, ``b`` with
  integer powers (``a b^-2``), or the normal-form pair ``(t, f)`` / ``(m, n)``
* direct products: ``(left | right)``
* wreath products: products of factors ``lamp(site: value)`` and
  ``base(position)``, e.g. ``lamp(0: 1) lamp(2: 1) base(-1)``

Measure literals::

    measure { atom "ab" 1/2; atom "ba" 0.5 }

Weights may be fractions, decimals, or integers and are read exactly.

Family references: ``dinf(p=3/4, k=5)``, ``bs11(p=3/4, k=2)``,
``z_drift(k=3)``, ``lamplighter(k=8, p=3/4)``, ``f2product(k=8, p=3/4)``;
``k=limit`` (or omitting ``k``) selects the limit measure.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable

from . import groups, magnus, measures
from .groups import (
    BaumslagSolitar,
    Cyclic,
    Dihedral,
    DirectProduct,
    FreeGroup,
    FreeSolvable,
    GroupElement,
    GroupSpec,
    IntegerLattice,
    Wreath,
)
from .measures import FiniteMeasure


class GrammarError(ValueError):
    """Malformed group, element, measure, or family text."""


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str) -> GrammarError:
        return GrammarError(f"{message} at offset {self.pos} in {self.text!r}")

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def eof(self) -> bool:
        self.skip_ws()
        return self.pos >= len(self.text)

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def try_lit(self, lit: str) -> bool:
        self.skip_ws()
        if self.text.startswith(lit, self.pos):
            self.pos += len(lit)
            return True
        return False

    def expect(self, lit: str) -> None:
        if not self.try_lit(lit):
            raise self.error(f"expected {lit!r}")

    def name(self) -> str:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and (self.text[self.pos].isalpha()
                                             or self.text[self.pos] == "_"):
            self.pos += 1
        if self.pos == start:
            raise self.error("expected a name")
        return self.text[start:self.pos]

    def ident(self) -> str:
        """Like ``name`` but digits are allowed after the first letter."""
        self.skip_ws()
        start = self.pos
        if self.pos < len(self.text) and (self.text[self.pos].isalpha()
                                          or self.text[self.pos] == "_"):
            self.pos += 1
            while self.pos < len(self.text) and (self.text[self.pos].isalnum()
                                                 or self.text[self.pos] == "_"):
                self.pos += 1
        if self.pos == start:
            raise self.error("expected a name")
        return self.text[start:self.pos]

    def integer(self) -> int:
        self.skip_ws()
        start = self.pos
        if self.pos < len(self.text) and self.text[self.pos] in "+-":
            self.pos += 1
        digits = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == digits:
            raise self.error("expected an integer")
        return int(self.text[start:self.pos])

    def number(self) -> Fraction:
        """Integer, fraction a/b, or decimal — read exactly."""
        self.skip_ws()
        start = self.pos
        if self.pos < len(self.text) and self.text[self.pos] in "+-":
            self.pos += 1
        while self.pos < len(self.text) and (self.text[self.pos].isdigit()
                                             or self.text[self.pos] in "./"):
            self.pos += 1
        if self.pos == start:
            raise self.error("expected a number")
        try:
            return Fraction(self.text[start:self.pos])
        except (ValueError, ZeroDivisionError) as exc:
            raise self.error(f"bad number ({exc})") from None

    def quoted(self) -> str:
        self.skip_ws()
        if self.peek() != '"':
            raise self.error("expected a quoted string")
        end = self.text.find('"', self.pos + 1)
        if end < 0:
            raise self.error("unterminated quoted string")
        out = self.text[self.pos + 1:end]
        self.pos = end + 1
        return out


# ---------------------------------------------------------------------------
# group specs


def _group(sc: _Scanner) -> GroupSpec:
    sc.skip_ws()
    word = sc.name()
    if word == "Z":
        if sc.try_lit("^"):
            return IntegerLattice(sc.integer())
        return IntegerLattice(1)
    if word == "C":
        return Cyclic(sc.integer())
    if word == "F":
        return FreeGroup(sc.integer())
    if word in ("Dinf", "dinf"):
        return Dihedral()
    if word == "BS":
        sc.expect("(")
        if sc.integer() != 1:
            raise sc.error("only BS(1,-1) is supported")
        sc.expect(",")
        if sc.integer() != -1:
            raise sc.error("only BS(1,-1) is supported")
        sc.expect(")")
        return BaumslagSolitar()
    if word == "S":
        sc.expect("(")
        rank = sc.integer()
        sc.expect(",")
        length = sc.integer()
        sc.expect(")")
        return FreeSolvable(rank, length)
    if word == "wreath":
        sc.expect("(")
        lamp = _group(sc)
        sc.expect(",")
        base = _group(sc)
        sc.expect(")")
        return Wreath(lamp, base)
    if word == "tower":
        sc.expect("(")
        parts = [_group(sc)]
        while sc.try_lit(";"):
            parts.append(_group(sc))
        sc.expect(")")
        if len(parts) < 2:
            raise sc.error("tower needs at least one lamp and a base")
        # listed outermost-lamp first; the builder takes lamps inner-to-outer
        return groups.wreath_tower(list(reversed(parts[:-1])), parts[-1])
    if word == "product":
        sc.expect("(")
        left = _group(sc)
        sc.expect(",")
        right = _group(sc)
        sc.expect(")")
        return DirectProduct(left, right)
    raise sc.error(f"unknown group {word!r}")


def parse_group(text: str) -> GroupSpec:
    sc = _Scanner(text)
    spec = _group(sc)
    if not sc.eof():
        raise sc.error("trailing input after group spec")
    return spec


def spec_to_text(spec: GroupSpec) -> str:
    t = type(spec)
    if t is IntegerLattice:
        return "Z" if spec.dim == 1 else f"Z^{spec.dim}"
    if t is Cyclic:
        return f"C{spec.modulus}"
    if t is FreeGroup:
        return f"F{spec.rank}"
    if t is Dihedral:
        return "Dinf"
    if t is BaumslagSolitar:
        return "BS(1,-1)"
    if t is FreeSolvable:
        return f"S({spec.rank},{spec.length})"
    if t is Wreath:
        return f"wreath({spec_to_text(spec.lamp)}, {spec_to_text(spec.base)})"
    if t is DirectProduct:
        return f"product({spec_to_text(spec.left)}, {spec_to_text(spec.right)})"
    raise GrammarError(f"no textual form for {spec!r}")


# ---------------------------------------------------------------------------
# elements

_WORD_STOP = ':)|;},"'


def _word_span(sc: _Scanner) -> str:
    """Take the maximal balanced-commutator span usable as a free word."""
    sc.skip_ws()
    start = sc.pos
    depth = 0
    while sc.pos < len(sc.text):
        c = sc.text[sc.pos]
        if c == "[":
            depth += 1
        elif c == "]":
            if depth == 0:
                break
            depth -= 1
        elif depth == 0 and c in _WORD_STOP:
            break
        sc.pos += 1
    if sc.pos == start:
        raise sc.error("expected a word")
    return sc.text[start:sc.pos]


def _int_tuple(sc: _Scanner, dim: int) -> tuple[int, ...]:
    if sc.peek() == "(":
        sc.expect("(")
        out = [sc.integer()]
        while sc.try_lit(","):
            out.append(sc.integer())
        sc.expect(")")
    else:
        out = [sc.integer()]
    if len(out) != dim:
        raise sc.error(f"expected {dim} coordinates, got {len(out)}")
    return tuple(out)


def _letter_word(sc: _Scanner, spec: GroupSpec,
                 letters: dict[str, GroupElement]) -> GroupElement:
    """Products of single-letter generators with optional integer powers."""
    out = groups.identity(spec)
    seen = False
    while True:
        c = sc.peek()
        if c == "e":
            sc.expect("e")
            seen = True
            continue
        if c not in letters:
            break
        sc.expect(c)
        seen = True
        power = sc.integer() if sc.try_lit("^") else 1
        gen = letters[c] if power >= 0 else groups.inverse(spec, letters[c])
        for _ in range(abs(power)):
            out = groups.multiply(spec, out, gen)
    if not seen:
        raise sc.error("expected a generator word")
    return out


def _element(sc: _Scanner, spec: GroupSpec) -> GroupElement:
    t = type(spec)
    if sc.peek() == "e" and t not in (Dihedral, BaumslagSolitar):
        nxt = sc.pos + 1
        rest = sc.text[nxt:nxt + 1]
        if not (rest.isalnum() or rest == "_"):
            sc.expect("e")
            return groups.identity(spec)
    if t is IntegerLattice:
        return _int_tuple(sc, spec.dim)
    if t is Cyclic:
        return sc.integer() % spec.modulus
    if t is FreeGroup:
        try:
            return magnus.parse_word(_word_span(sc), spec.rank)
        except magnus.WordError as exc:
            raise sc.error(str(exc)) from None
    if t is FreeSolvable:
        if spec.length == 1 and sc.peek() in "(+-0123456789":
            return _int_tuple(sc, spec.rank)
        try:
            word = magnus.parse_word(_word_span(sc), spec.rank)
        except magnus.WordError as exc:
            raise sc.error(str(exc)) from None
        return magnus.magnus_embed(word, spec.rank, spec.length)
    if t is Dihedral:
        if sc.peek() == "(":
            sc.expect("(")
            trans = sc.integer()
            sc.expect(",")
            flip = sc.integer()
            sc.expect(")")
            if flip not in (0, 1):
                raise sc.error("flip bit must be 0 or 1")
            return (trans, flip)
        return _letter_word(sc, spec, {"a": groups.DINF_A, "b": groups.DINF_B})
    if t is BaumslagSolitar:
        if sc.peek() == "(":
            sc.expect("(")
            m = sc.integer()
            sc.expect(",")
            n = sc.integer()
            sc.expect(")")
            return (m, n)
        return _letter_word(sc, spec, {"a": groups.BS_A, "b": groups.BS_B})
    if t is DirectProduct:
        sc.expect("(")
        left = _element(sc, spec.left)
        sc.expect("|")
        right = _element(sc, spec.right)
        sc.expect(")")
        return (left, right)
    if t is Wreath:
        out = groups.identity(spec)
        seen = False
        while True:
            if sc.try_lit("lamp"):
                sc.expect("(")
                site = _element(sc, spec.base)
                sc.expect(":")
                value = _element(sc, spec.lamp)
                sc.expect(")")
                factor = ((() if value == groups.identity(spec.lamp)
                           else ((site, value),)), groups.identity(spec.base))
                out = groups.multiply(spec, out, factor)
                seen = True
                continue
            if sc.try_lit("base"):
                sc.expect("(")
                pos = _element(sc, spec.base)
                sc.expect(")")
                out = groups.multiply(spec, out, ((), pos))
                seen = True
                continue
            break
        if not seen:
            raise sc.error("expected lamp(...)/base(...) factors")
        return out
    raise sc.error(f"no element grammar for {spec!r}")


def parse_element(spec: GroupSpec, text: str) -> GroupElement:
    sc = _Scanner(text)
    g = _element(sc, spec)
    if not sc.eof():
        raise sc.error("trailing input after element")
    groups.validate(spec, g)
    return g


def element_to_text(spec: GroupSpec, g: GroupElement) -> str:
    t = type(spec)
    if g == groups.identity(spec):
        return "e"
    if t is IntegerLattice:
        return str(g[0]) if spec.dim == 1 else "(" + ", ".join(map(str, g)) + ")"
    if t is Cyclic:
        return str(g)
    if t is FreeGroup:
        return magnus.word_to_text(g)
    if t in (Dihedral, BaumslagSolitar):
        return f"({g[0]}, {g[1]})"
    if t is DirectProduct:
        return (f"({element_to_text(spec.left, g[0])} | "
                f"{element_to_text(spec.right, g[1])})")
    if t is Wreath or (t is FreeSolvable and spec.length >= 2):
        lamp_spec, base_spec = groups.wreath_parts(spec)
        lamps, pos = g
        parts = [f"lamp({element_to_text(base_spec, site)}: "
                 f"{element_to_text(lamp_spec, value)})"
                 for site, value in lamps]
        if pos != groups.identity(base_spec):
            parts.append(f"base({element_to_text(base_spec, pos)})")
        return " ".join(parts)
    if t is FreeSolvable:
        return element_to_text(IntegerLattice(spec.rank), g)
    raise GrammarError(f"no textual form for elements of {spec!r}")


# ---------------------------------------------------------------------------
# measures and families


def parse_measure(spec: GroupSpec, text: str, exact: bool = True) -> FiniteMeasure:
    sc = _Scanner(text)
    sc.expect("measure")
    sc.expect("{")
    pairs: list[tuple[GroupElement, Fraction | float]] = []
    while not sc.try_lit("}"):
        sc.expect("atom")
        g = parse_element(spec, sc.quoted())
        w = sc.number()
        pairs.append((g, w if exact else float(w)))
        if not sc.try_lit(";"):
            sc.expect("}")
            break
    if not sc.eof():
        raise sc.error("trailing input after measure literal")
    return FiniteMeasure.from_pairs(spec, pairs, exact=exact)


def measure_to_text(mu: FiniteMeasure) -> str:
    parts = []
    for g, w in mu.atoms():
        weight = str(w) if mu.exact else repr(w)
        parts.append(f'atom "{element_to_text(mu.spec, g)}" {weight};')
    return "measure { " + " ".join(parts) + " }"


def _family_params(sc: _Scanner) -> dict[str, Fraction | str]:
    params: dict[str, Fraction | str] = {}
    if not sc.try_lit("("):
        return params
    if sc.try_lit(")"):
        return params
    while True:
        key = sc.name()
        sc.expect("=")
        if sc.peek().isalpha():
            params[key] = sc.name()
        else:
            params[key] = sc.number()
        if sc.try_lit(")"):
            return params
        sc.expect(",")


def _family_k(params: dict) -> int | None:
    k = params.pop("k", "limit")
    if isinstance(k, str):
        if k not in ("limit", "inf"):
            raise GrammarError(f"bad family index {k!r}")
        return None
    if k != int(k):
        raise GrammarError(f"family index must be an integer, got {k}")
    return int(k)


def uniform_flip() -> FiniteMeasure:
    """Uniform lamp-increment law on the order-2 group."""
    return measures.uniform_measure(Cyclic(2), [0, 1])


def f2_uniform() -> FiniteMeasure:
    """Uniform law on the four free generators of the rank-2 free group."""
    spec = FreeGroup(2)
    return measures.uniform_measure(spec, [(1,), (-1,), (2,), (-2,)])


def lamplighter_family(p: Fraction, k: int | None) -> FiniteMeasure:
    """Half a uniform lamp flip, half a dihedral base move (or its limit)."""
    base = (measures.dinf_limit(p) if k is None
            else measures.dinf_family(p, k))
    return measures.lamplighter_mix(uniform_flip(), base)


def f2product_family(p: Fraction, k: int | None) -> FiniteMeasure:
    """Independent product of the free-group uniform law with the
    lamplighter-over-dihedral family member."""
    return measures.product_measure(f2_uniform(), lamplighter_family(p, k))


def family_measure(text: str) -> FiniteMeasure:
    """Resolve a family reference like ``dinf(p=3/4, k=5)`` to a measure."""
    sc = _Scanner(text)
    sc.try_lit("family")
    name = sc.ident()
    params = _family_params(sc)
    if not sc.eof():
        raise sc.error("trailing input after family reference")
    k = _family_k(params)
    p = params.pop("p", Fraction(3, 4))
    if isinstance(p, str):
        raise GrammarError(f"parameter p must be a number, got {p!r}")
    if params:
        raise GrammarError(f"unknown family parameters {sorted(params)}")
    if name == "dinf":
        return measures.dinf_limit(p) if k is None else measures.dinf_family(p, k)
    if name == "bs11":
        return measures.bs11_limit(p) if k is None else measures.bs11_family(p, k)
    if name == "z_drift":
        if k is None:
            return measures.z_drift_limit()
        return measures.z_drift_family(k)
    if name == "lamplighter":
        return lamplighter_family(p, k)
    if name == "f2product":
        return f2product_family(p, k)
    raise GrammarError(f"unknown family {name!r}")


def parse_measure_or_family(spec_text: str | None, text: str,
                            exact: bool = True) -> FiniteMeasure:
    """Accept either a measure literal (needs a group) or a family reference."""
    stripped = text.strip()
    if stripped.startswith("measure"):
        if spec_text is None:
            raise GrammarError("a measure literal needs a group spec")
        mu = parse_measure(parse_group(spec_text), stripped, exact=exact)
    else:
        mu = family_measure(stripped)
        if not exact:
            mu = mu.as_float()
    return mu
