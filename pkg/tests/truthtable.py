"""Brute-force truth-table oracle, independent of the package's closure.

Enumerates every valuation over the mentioned atoms; a literal is a
consequence iff it holds in every model of the proposition set.
"""

from itertools import product

from commonground import Biconditional, Literal, Rule


def atoms_of(props):
    names = set()
    for p in props:
        if isinstance(p, Literal):
            names.add(p.atom)
        elif isinstance(p, Rule):
            names.update(a.atom for a in p.antecedents)
            names.add(p.consequent.atom)
        elif isinstance(p, Biconditional):
            names.update((p.left.atom, p.right.atom))
    return sorted(names)


def satisfies(valuation, p):
    def lit(l):
        return valuation[l.atom] == l.positive

    if isinstance(p, Literal):
        return lit(p)
    if isinstance(p, Rule):
        return lit(p.consequent) if all(lit(a) for a in p.antecedents) else True
    return lit(p.left) == lit(p.right)


def models(props):
    names = atoms_of(props)
    found = []
    for bits in product((False, True), repeat=len(names)):
        valuation = dict(zip(names, bits))
        if all(satisfies(valuation, p) for p in props):
            found.append(valuation)
    return found


def literal_consequences(props):
    """All literals true in every model, or None if the set is unsatisfiable."""
    names = atoms_of(props)
    mods = models(props)
    if not mods:
        return None
    out = set()
    for name in names:
        values = {m[name] for m in mods}
        if values == {True}:
            out.add(Literal(name, True))
        elif values == {False}:
            out.add(Literal(name, False))
    return out
