"""Test-only helpers: random subset-graph generation and a brute-force
isomorphism check, both independent of the library's encode/parse path."""

from __future__ import annotations

import random

from fraglead.smiles import Atom, Bond, MolecularGraph, assign_implicit_hydrogens

ELEMENTS = ("B", "C", "N", "O", "P", "S", "F", "Cl", "Br", "I")


def random_graph(rng: random.Random, max_atoms: int = 10, max_rings: int = 3) -> MolecularGraph:
    """Random connected graph: a random tree plus up to ``max_rings``
    extra edges between non-adjacent atoms."""
    n = rng.randint(1, max_atoms)
    atoms = tuple(Atom(rng.choice(ELEMENTS)) for _ in range(n))
    bonds = []
    taken = set()
    for child in range(1, n):
        parent = rng.randrange(child)
        bonds.append(Bond(parent, child, rng.choice((1, 1, 1, 2, 3))))
        taken.add((parent, child))
    candidates = [
        (a, b)
        for a in range(n)
        for b in range(a + 1, n)
        if (a, b) not in taken
    ]
    rng.shuffle(candidates)
    for a, b in candidates[: rng.randint(0, max_rings)]:
        bonds.append(Bond(a, b, rng.choice((1, 1, 2))))
    return assign_implicit_hydrogens(MolecularGraph(atoms, tuple(bonds)))


def brute_force_isomorphic(g1: MolecularGraph, g2: MolecularGraph) -> bool:
    """Backtracking search for an atom bijection preserving elements,
    implicit hydrogens, and bond orders."""
    if len(g1.atoms) != len(g2.atoms) or len(g1.bonds) != len(g2.bonds):
        return False
    n = len(g1.atoms)
    adj1 = {i: {} for i in range(n)}
    adj2 = {i: {} for i in range(n)}
    for bond in g1.bonds:
        adj1[bond.a][bond.b] = bond.order
        adj1[bond.b][bond.a] = bond.order
    for bond in g2.bonds:
        adj2[bond.a][bond.b] = bond.order
        adj2[bond.b][bond.a] = bond.order

    def compatible(i: int, j: int) -> bool:
        a1, a2 = g1.atoms[i], g2.atoms[j]
        return (
            a1.element == a2.element
            and a1.implicit_h == a2.implicit_h
            and len(adj1[i]) == len(adj2[j])
        )

    mapping: dict[int, int] = {}
    used: set[int] = set()

    def extend(i: int) -> bool:
        if i == n:
            return True
        for j in range(n):
            if j in used or not compatible(i, j):
                continue
            ok = True
            for neighbor, order in adj1[i].items():
                if neighbor in mapping:
                    if adj2[j].get(mapping[neighbor]) != order:
                        ok = False
                        break
            if not ok:
                continue
            mapping[i] = j
            used.add(j)
            if extend(i + 1):
                return True
            del mapping[i]
            used.discard(j)
        return False

    return extend(0)
