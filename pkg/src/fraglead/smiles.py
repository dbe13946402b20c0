"""Core SMILES handling: tokenize, parse, hydrogen counts, formula, encode.

The supported dialect is a deliberately small subset of SMILES:

- uppercase organic-set atoms ``B C N O P S F Cl Br I`` (``Cl``/``Br`` are
  single two-character tokens),
- bond symbols ``=`` ``#`` ``-``,
- ring-closure digits ``1``-``9`` (reusable once their pair has closed),
- branch parentheses.

Aromatic lowercase atoms, bracket atoms, charges, stereo markers, ``%nn``
ring closures and ``.`` disconnection are rejected with
:class:`~fraglead.errors.UnknownSymbol`.  Keeping the alphabet small makes
every accepted string a clean sequence of symbol tokens, which is exactly
what the fragmenter slices.

All types here are immutable values; the functions are pure.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterator

from fraglead.errors import (
    DanglingBondSymbol,
    LeadingStructureToken,
    RingDigitExhausted,
    SmilesError,
    UnknownSymbol,
    UnmatchedParenthesis,
    UnmatchedRingDigit,
)

#: Elements accepted without brackets, with the default valence used to fill
#: in implicit hydrogens.
DEFAULT_VALENCE: dict[str, int] = {
    "B": 3,
    "C": 4,
    "N": 3,
    "O": 2,
    "P": 3,
    "S": 2,
    "F": 1,
    "Cl": 1,
    "Br": 1,
    "I": 1,
}

_TWO_CHAR_ELEMENTS = ("Cl", "Br")
_BOND_ORDERS = {"-": 1, "=": 2, "#": 3}
_ORDER_SYMBOLS = {1: "", 2: "=", 3: "#"}


class TokenKind(Enum):
    ATOM = "atom"
    RING_DIGIT = "ring_digit"
    BOND = "bond"
    OPEN_BRANCH = "open_branch"
    CLOSE_BRANCH = "close_branch"


@dataclass(frozen=True)
class Token:
    """One SMILES symbol: an atom, a ring digit, a bond character or a
    parenthesis.  ``position`` is the 0-based character offset in the
    source string."""

    kind: TokenKind
    text: str
    position: int


@dataclass(frozen=True)
class TokenSequence:
    """The tokens of one SMILES string.

    Token spans are contiguous, non-overlapping and cover ``source``
    exactly, so joining the token texts reproduces the input.
    """

    tokens: tuple[Token, ...]
    source: str

    def __len__(self) -> int:
        return len(self.tokens)

    def __iter__(self) -> Iterator[Token]:
        return iter(self.tokens)

    def __getitem__(self, index: int) -> Token:
        return self.tokens[index]


@dataclass(frozen=True)
class Atom:
    element: str
    implicit_h: int = 0


@dataclass(frozen=True)
class Bond:
    """Undirected bond; ``a`` < ``b`` are atom indices, order is 1, 2 or 3."""

    a: int
    b: int
    order: int = 1

    def __post_init__(self):
        if self.a == self.b:
            raise ValueError(f"self-loop bond on atom {self.a}")
        if self.a > self.b:
            low, high = self.b, self.a
            object.__setattr__(self, "a", low)
            object.__setattr__(self, "b", high)
        if self.order not in (1, 2, 3):
            raise ValueError(f"unsupported bond order {self.order}")

    @property
    def endpoints(self) -> tuple[int, int]:
        return (self.a, self.b)


@dataclass(frozen=True)
class MolecularGraph:
    """Heavy atoms plus bonds of a single connected SMILES term.

    ``valence_warnings`` collects notes about atoms whose incident bond
    orders exceed the default valence (their implicit hydrogen count is
    clamped to 0 instead of failing).
    """

    atoms: tuple[Atom, ...]
    bonds: tuple[Bond, ...]
    valence_warnings: tuple[str, ...] = field(default=())

    def __post_init__(self):
        n = len(self.atoms)
        seen: set[tuple[int, int]] = set()
        for bond in self.bonds:
            if not (0 <= bond.a < n and 0 <= bond.b < n):
                raise ValueError(f"bond {bond.endpoints} references a missing atom")
            if bond.endpoints in seen:
                raise ValueError(f"duplicate bond between atoms {bond.endpoints}")
            seen.add(bond.endpoints)

    def neighbors(self, index: int) -> list[int]:
        """Adjacent atom indices, ascending."""
        out = [b.b if b.a == index else b.a for b in self.bonds if index in b.endpoints]
        return sorted(out)

    def bond_order(self, i: int, j: int) -> int:
        i, j = min(i, j), max(i, j)
        for bond in self.bonds:
            if bond.endpoints == (i, j):
                return bond.order
        raise KeyError(f"no bond between atoms {i} and {j}")


@dataclass(frozen=True)
class ElementCounts:
    """Element histogram of a molecule, including implicit hydrogens."""

    counts: dict[str, int]

    def hill(self) -> str:
        """Render the formula in Hill order: C first, H second, the rest
        alphabetical (all alphabetical when there is no carbon)."""
        parts = []
        remaining = dict(self.counts)
        if "C" in remaining:
            for symbol in ("C", "H"):
                if symbol in remaining:
                    parts.append((symbol, remaining.pop(symbol)))
        parts.extend(sorted(remaining.items()))
        return "".join(s if n == 1 else f"{s}{n}" for s, n in parts)

    def __str__(self) -> str:
        return self.hill()


def tokenize(source: str) -> TokenSequence:
    """Split a SMILES string into symbol tokens.

    ``Cl`` and ``Br`` are consumed greedily as single atom tokens; any
    character outside the subset alphabet raises
    :class:`~fraglead.errors.UnknownSymbol` with its position.
    """
    if not source:
        raise SmilesError("empty SMILES string", 0)
    tokens: list[Token] = []
    i = 0
    n = len(source)
    while i < n:
        two = source[i : i + 2]
        ch = source[i]
        if two in _TWO_CHAR_ELEMENTS:
            tokens.append(Token(TokenKind.ATOM, two, i))
            i += 2
        elif ch in DEFAULT_VALENCE:
            tokens.append(Token(TokenKind.ATOM, ch, i))
            i += 1
        elif ch in _BOND_ORDERS:
            tokens.append(Token(TokenKind.BOND, ch, i))
            i += 1
        elif "1" <= ch <= "9":
            tokens.append(Token(TokenKind.RING_DIGIT, ch, i))
            i += 1
        elif ch == "(":
            tokens.append(Token(TokenKind.OPEN_BRANCH, ch, i))
            i += 1
        elif ch == ")":
            tokens.append(Token(TokenKind.CLOSE_BRANCH, ch, i))
            i += 1
        else:
            raise UnknownSymbol(i, ch)
    return TokenSequence(tuple(tokens), source)


def parse(tokens: TokenSequence) -> MolecularGraph:
    """Build the molecular graph described by a token sequence.

    One graph atom per atom token; each matched ring-digit pair adds one
    bond (the digit becomes available again after closing); a branch
    attaches to the atom before its ``(``; a bond symbol applies to the
    next bond actually created.  Implicit hydrogens are *not* assigned
    here, see :func:`assign_implicit_hydrogens`.
    """
    atoms: list[Atom] = []
    bonds: list[Bond] = []
    prev: int | None = None
    pending: tuple[int, int] | None = None  # (bond order, symbol position)
    branch_stack: list[tuple[int, int]] = []  # (atom index, '(' position)
    open_rings: dict[str, tuple[int, int]] = {}  # digit -> (atom index, position)

    def take_order() -> int:
        nonlocal pending
        order = pending[0] if pending is not None else 1
        pending = None
        return order

    for token in tokens:
        if token.kind is TokenKind.ATOM:
            atoms.append(Atom(token.text))
            index = len(atoms) - 1
            if prev is not None:
                bonds.append(Bond(prev, index, take_order()))
            prev = index
        elif token.kind is TokenKind.BOND:
            if prev is None:
                raise LeadingStructureToken(
                    f"bond symbol {token.text!r} before any atom", token.position
                )
            if pending is not None:
                raise DanglingBondSymbol(
                    f"bond symbol at position {pending[1]} not followed by an atom or ring digit",
                    pending[1],
                )
            pending = (_BOND_ORDERS[token.text], token.position)
        elif token.kind is TokenKind.RING_DIGIT:
            if prev is None:
                raise LeadingStructureToken(
                    f"ring digit {token.text!r} before any atom", token.position
                )
            if token.text in open_rings:
                partner, _ = open_rings.pop(token.text)
                if partner == prev:
                    raise UnmatchedRingDigit(
                        f"ring digit {token.text!r} closes onto its own atom",
                        token.position,
                    )
                bonds.append(Bond(partner, prev, take_order()))
            else:
                open_rings[token.text] = (prev, token.position)
        elif token.kind is TokenKind.OPEN_BRANCH:
            if prev is None:
                raise LeadingStructureToken("branch before any atom", token.position)
            if pending is not None:
                raise DanglingBondSymbol(
                    "bond symbol not followed by an atom or ring digit",
                    pending[1],
                )
            branch_stack.append((prev, token.position))
        else:  # CLOSE_BRANCH
            if prev is None:
                raise LeadingStructureToken("')' before any atom", token.position)
            if pending is not None:
                raise DanglingBondSymbol(
                    "bond symbol not followed by an atom or ring digit",
                    pending[1],
                )
            if not branch_stack:
                raise UnmatchedParenthesis(
                    "')' without a matching '('", token.position
                )
            prev, _ = branch_stack.pop()

    if pending is not None:
        raise DanglingBondSymbol("bond symbol at end of input", pending[1])
    if branch_stack:
        _, position = branch_stack[-1]
        raise UnmatchedParenthesis("'(' never closed", position)
    if open_rings:
        digit, (_, position) = min(open_rings.items(), key=lambda kv: kv[1][1])
        raise UnmatchedRingDigit(f"ring digit {digit!r} never closed", position)

    try:
        return MolecularGraph(tuple(atoms), tuple(bonds))
    except ValueError as exc:
        raise SmilesError(str(exc)) from exc


def assign_implicit_hydrogens(graph: MolecularGraph) -> MolecularGraph:
    """Return a copy of the graph with implicit hydrogen counts filled in.

    Each atom gets ``default_valence - sum of incident bond orders``,
    clamped at zero.  Over-bonded atoms are noted in ``valence_warnings``
    rather than rejected, so fragments and exotic inputs still yield a
    formula.
    """
    used = [0] * len(graph.atoms)
    for bond in graph.bonds:
        used[bond.a] += bond.order
        used[bond.b] += bond.order

    atoms = []
    warnings = list(graph.valence_warnings)
    for index, atom in enumerate(graph.atoms):
        valence = DEFAULT_VALENCE[atom.element]
        spare = valence - used[index]
        if spare < 0:
            warnings.append(
                f"atom {index} ({atom.element}) exceeds valence "
                f"{valence} with {used[index]} bond order; hydrogens clamped to 0"
            )
            spare = 0
        atoms.append(replace(atom, implicit_h=spare))
    return MolecularGraph(tuple(atoms), graph.bonds, tuple(warnings))


def molecular_formula(graph: MolecularGraph) -> ElementCounts:
    """Count every element plus the summed implicit hydrogens.

    Expects hydrogens to be assigned already (see
    :func:`assign_implicit_hydrogens` or :func:`parse_smiles`).
    """
    counts: dict[str, int] = {}
    hydrogens = 0
    for atom in graph.atoms:
        counts[atom.element] = counts.get(atom.element, 0) + 1
        hydrogens += atom.implicit_h
    if hydrogens:
        counts["H"] = counts.get("H", 0) + hydrogens
    return ElementCounts(counts)


def parse_smiles(source: str) -> MolecularGraph:
    """Tokenize, parse and assign hydrogens in one step."""
    return assign_implicit_hydrogens(parse(tokenize(source)))


def _dfs_layout(graph: MolecularGraph):
    """Walk the graph once (from atom 0, neighbors in index order) and
    split its edges into tree children and ring bonds.

    Returns ``(children, ring_edges)`` where ``children[u]`` lists tree
    children in visit order and ``ring_edges`` maps each atom to the ring
    bonds touching it as ``(ordinal, open_atom, close_atom)`` triples.
    """
    n = len(graph.atoms)
    visited = [False] * n
    visit_rank = [0] * n
    children: list[list[int]] = [[] for _ in range(n)]
    ring_edges: list[list[tuple[int, int, int]]] = [[] for _ in range(n)]
    classified: set[tuple[int, int]] = set()
    ordinal = 0

    visited[0] = True
    counter = 1
    stack: list[tuple[int, Iterator[int]]] = [(0, iter(graph.neighbors(0)))]
    while stack:
        u, it = stack[-1]
        advanced = False
        for v in it:
            edge = (min(u, v), max(u, v))
            if edge in classified:
                continue
            classified.add(edge)
            if not visited[v]:
                visited[v] = True
                visit_rank[v] = counter
                counter += 1
                children[u].append(v)
                stack.append((v, iter(graph.neighbors(v))))
                advanced = True
                break
            # back edge: the endpoint emitted earlier opens the digit
            opener, closer = (u, v) if visit_rank[u] < visit_rank[v] else (v, u)
            ring_edges[opener].append((ordinal, opener, closer))
            ring_edges[closer].append((ordinal, opener, closer))
            ordinal += 1
        if not advanced:
            stack.pop()

    if not all(visited):
        missing = [i for i, seen in enumerate(visited) if not seen]
        raise ValueError(f"graph is not connected; unreachable atoms {missing}")
    return children, ring_edges


def encode(graph: MolecularGraph) -> str:
    """Write the graph back out as a SMILES string of the subset.

    Depth-first from atom 0 with neighbors in index order; ring-closure
    digits are handed out in first-use order and reused once closed; all
    children but the last at a branch point are parenthesized; ``=`` and
    ``#`` mark orders 2 and 3.  The output re-parses to an isomorphic
    graph.  Raises :class:`~fraglead.errors.RingDigitExhausted` if more
    than 9 ring closures would be open at once.
    """
    if not graph.atoms:
        raise ValueError("cannot encode an empty graph")
    children, ring_edges = _dfs_layout(graph)

    out: list[str] = []
    digit_of: dict[int, str] = {}  # ring-bond ordinal -> digit currently assigned
    free_digits = [str(d) for d in range(1, 10)]

    # Work items are either literal text or an atom to emit.  Children are
    # pushed in reverse so the stream comes out in DFS order.
    work: list[tuple[str, str | int]] = [("atom", 0)]
    while work:
        kind, payload = work.pop()
        if kind == "text":
            out.append(payload)  # type: ignore[arg-type]
            continue
        u = int(payload)
        out.append(graph.atoms[u].element)
        for ordinal, opener, closer in sorted(ring_edges[u]):
            if u == opener:
                if not free_digits:
                    raise RingDigitExhausted(
                        "more than 9 ring closures open at once"
                    )
                digit = free_digits.pop(0)
                digit_of[ordinal] = digit
                out.append(digit)
            else:
                digit = digit_of.pop(ordinal)
                out.append(_ORDER_SYMBOLS[graph.bond_order(opener, closer)] + digit)
                free_digits.append(digit)
                free_digits.sort()
        kids = children[u]
        for i in range(len(kids) - 1, -1, -1):
            child = kids[i]
            bond_text = _ORDER_SYMBOLS[graph.bond_order(u, child)]
            if i == len(kids) - 1:
                work.append(("atom", child))
                work.append(("text", bond_text))
            else:
                work.append(("text", ")"))
                work.append(("atom", child))
                work.append(("text", "(" + bond_text))
    return "".join(out)
