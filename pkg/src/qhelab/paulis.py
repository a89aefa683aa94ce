"""Exact algebra of Pauli strings and Clifford operations.

Everything here is symbolic and exact: an n-qubit Pauli is stored in the
binary symplectic picture as a pair of bit vectors (x, z) together with a
power of i, so that the operator reads

    i^phase * (X^x1 Z^z1) (x) ... (x) (X^xn Z^zn).

Phases live in Z4 and are never floated.  Cliffords are stored as the
images of the 2n generators X_i, Z_i under conjugation (a tableau), plus
the elementary-gate word they were built from.  The gate set is fixed to
{H, S, CNOT, CZ, SWAP, X, Y, Z}; every Clifford handed out by this module
decomposes into it.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

PAULI_LETTERS = "IXYZ"  # sigma_0 .. sigma_3

# (x, z) bits of each single-qubit letter in the symplectic encoding.
_LETTER_BITS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_PHASE_PREFIX = {"+": 0, "+i": 1, "i": 1, "-": 2, "-i": 3}
_PREFIX_OF_PHASE = {0: "+", 1: "+i", 2: "-", 3: "-i"}

CLIFFORD_GATES = ("H", "S", "CNOT", "CZ", "SWAP", "X", "Y", "Z")
_GATE_ARITY = {
    "H": 1, "S": 1, "X": 1, "Y": 1, "Z": 1,
    "CNOT": 2, "CZ": 2, "SWAP": 2,
    "T": 1, "M": 1, "CPAULI": 1,
}


class PauliAlgebraError(ValueError):
    """Raised on malformed operands (length mismatches, bad labels)."""


def _as_bits(v, n: int) -> np.ndarray:
    arr = np.asarray(v, dtype=np.uint8) & 1
    if arr.shape != (n,):
        raise PauliAlgebraError(f"bit vector of length {arr.shape} != {n}")
    return arr


class PauliString:
    """Signed n-qubit Pauli operator; immutable value type."""

    __slots__ = ("n_qubits", "x", "z", "phase")

    def __init__(self, x, z, phase: int = 0):
        x = np.asarray(x, dtype=np.uint8) & 1
        n = x.shape[0]
        object.__setattr__(self, "n_qubits", n)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "z", _as_bits(z, n))
        object.__setattr__(self, "phase", int(phase) & 3)
        self.x.setflags(write=False)
        self.z.setflags(write=False)

    def __setattr__(self, *_):
        raise AttributeError("PauliString is immutable")

    # -- constructors ---------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls(np.zeros(n, np.uint8), np.zeros(n, np.uint8), 0)

    @classmethod
    def single(cls, n: int, qubit: int, letter: str, phase: int = 0) -> "PauliString":
        x = np.zeros(n, np.uint8)
        z = np.zeros(n, np.uint8)
        bx, bz = _LETTER_BITS[letter]
        x[qubit], z[qubit] = bx, bz
        # canonical Y carries an explicit i (Y = i X Z)
        return cls(x, z, phase + (bx & bz))

    @classmethod
    def from_label(cls, label: str) -> "PauliString":
        """Parse '+XIZ', '-iYY', 'ZZ' (sign defaults to +)."""
        m = re.match(r"^(\+i|-i|\+|-|i)?([IXYZ]+)$", label.strip())
        if not m:
            raise PauliAlgebraError(f"bad Pauli label {label!r}")
        sign, letters = m.groups()
        phase = _PHASE_PREFIX[sign] if sign else 0
        bits = [_LETTER_BITS[c] for c in letters]
        x = np.array([b[0] for b in bits], np.uint8)
        z = np.array([b[1] for b in bits], np.uint8)
        n_y = int(np.sum(x & z))
        return cls(x, z, phase + n_y)

    # -- presentation ---------------------------------------------------

    def label(self) -> str:
        letters = "".join("IXZY"[xi + 2 * zi] for xi, zi in zip(self.x, self.z))
        n_y = int(np.sum(self.x & self.z))
        return _PREFIX_OF_PHASE[(self.phase - n_y) % 4] + letters

    def __repr__(self) -> str:
        return f"PauliString({self.label()!r})"

    # -- algebra ---------------------------------------------------------

    def __mul__(self, other: "PauliString") -> "PauliString":
        if self.n_qubits != other.n_qubits:
            raise PauliAlgebraError("PauliString length mismatch")
        phase = self.phase + other.phase + 2 * int(np.sum(self.z & other.x))
        return PauliString(self.x ^ other.x, self.z ^ other.z, phase)

    def adjoint(self) -> "PauliString":
        n_xz = int(np.sum(self.x & self.z))
        return PauliString(self.x, self.z, -self.phase + 2 * n_xz)

    def commutes(self, other: "PauliString") -> bool:
        if self.n_qubits != other.n_qubits:
            raise PauliAlgebraError("PauliString length mismatch")
        return int(np.sum((self.x & other.z) ^ (self.z & other.x))) % 2 == 0

    def weight(self) -> int:
        return int(np.sum(self.x | self.z))

    def is_identity(self) -> bool:
        return self.weight() == 0 and self.phase == 0

    def is_hermitian(self) -> bool:
        n_y = int(np.sum(self.x & self.z))
        return (self.phase - n_y) % 2 == 0

    def sign(self) -> int:
        """+1 or -1 for a Hermitian string."""
        n_y = int(np.sum(self.x & self.z))
        rel = (self.phase - n_y) % 4
        if rel == 0:
            return 1
        if rel == 2:
            return -1
        raise PauliAlgebraError("sign undefined for non-Hermitian phase")

    def positive(self) -> "PauliString":
        """The +1-signed Hermitian representative (phase folded out)."""
        n_y = int(np.sum(self.x & self.z))
        return PauliString(self.x, self.z, n_y)

    def negate(self) -> "PauliString":
        return PauliString(self.x, self.z, self.phase + 2)

    def symplectic(self) -> np.ndarray:
        """Length-2n bit vector (x | z)."""
        return np.concatenate([self.x, self.z])

    def tensor(self, other: "PauliString") -> "PauliString":
        return PauliString(np.concatenate([self.x, other.x]),
                           np.concatenate([self.z, other.z]),
                           self.phase + other.phase)

    def embed(self, n: int, positions: Iterable[int]) -> "PauliString":
        pos = list(positions)
        if len(pos) != self.n_qubits or len(set(pos)) != len(pos):
            raise PauliAlgebraError("embed needs one distinct slot per qubit")
        x = np.zeros(n, np.uint8)
        z = np.zeros(n, np.uint8)
        x[pos] = self.x
        z[pos] = self.z
        return PauliString(x, z, self.phase)

    def restricted_letter(self, qubit: int) -> str:
        xi, zi = int(self.x[qubit]), int(self.z[qubit])
        return "IXZY"[xi + 2 * zi]

    def to_matrix(self) -> np.ndarray:
        """Dense 2^n x 2^n matrix; intended for small n oracles."""
        mats = {"I": np.eye(2), "X": np.array([[0, 1], [1, 0]]),
                "Z": np.array([[1, 0], [0, -1]])}
        out = np.array([[1.0 + 0j]])
        for xi, zi in zip(self.x, self.z):
            factor = np.eye(2, dtype=complex)
            if xi:
                factor = factor @ mats["X"]
            if zi:
                factor = factor @ mats["Z"]
            out = np.kron(out, factor)
        return (1j ** self.phase) * out

    def __eq__(self, other) -> bool:
        return (isinstance(other, PauliString)
                and self.n_qubits == other.n_qubits
                and self.phase == other.phase
                and bool(np.array_equal(self.x, other.x))
                and bool(np.array_equal(self.z, other.z)))

    def __hash__(self) -> int:
        return hash((self.n_qubits, self.phase, self.x.tobytes(), self.z.tobytes()))


# ---------------------------------------------------------------------------
# Batch tableau engine: rows of (x, z, phase) updated in place per gate.
# ---------------------------------------------------------------------------

def _apply_gate_rows(x: np.ndarray, z: np.ndarray, ph: np.ndarray,
                     name: str, qs: tuple[int, ...]) -> None:
    """Conjugate every row Pauli by the elementary gate, in place."""
    if name == "H":
        q = qs[0]
        ph += 2 * (x[:, q] & z[:, q])
        x[:, q], z[:, q] = z[:, q].copy(), x[:, q].copy()
    elif name == "S":
        q = qs[0]
        ph += x[:, q]
        z[:, q] ^= x[:, q]
    elif name == "X":
        ph += 2 * z[:, qs[0]]
    elif name == "Y":
        q = qs[0]
        ph += 2 * (x[:, q] ^ z[:, q])
    elif name == "Z":
        ph += 2 * x[:, qs[0]]
    elif name == "CNOT":
        c, t = qs
        z[:, c] ^= z[:, t]
        x[:, t] ^= x[:, c]
    elif name == "CZ":
        a, b = qs
        ph += 2 * (x[:, a] & x[:, b])
        z[:, a] ^= x[:, b]
        z[:, b] ^= x[:, a]
    elif name == "SWAP":
        a, b = qs
        x[:, a], x[:, b] = x[:, b].copy(), x[:, a].copy()
        z[:, a], z[:, b] = z[:, b].copy(), z[:, a].copy()
    else:
        raise PauliAlgebraError(f"not a Clifford gate: {name}")
    ph &= 3


def _invert_gate(name: str, qs: tuple[int, ...]) -> list[tuple[str, tuple[int, ...]]]:
    if name == "S":
        # S^dagger = S . Z  (diagonal, order free); emitted in application order
        return [("Z", qs), ("S", qs)]
    return [(name, qs)]


class Gate(NamedTuple):
    """One circuit element: Clifford gate, T marker, measurement, or
    classically controlled Pauli."""
    name: str
    qubits: tuple[int, ...]
    bit: str | None = None      # classical bit label for M / CPAULI
    pauli: str | None = None    # Pauli letter for CPAULI

    def render(self) -> str:
        if self.name == "M":
            return f"M {self.qubits[0]} -> {self.bit}"
        if self.name == "CPAULI":
            return f"CPAULI {self.bit} {self.pauli} {self.qubits[0]}"
        return " ".join([self.name, *map(str, self.qubits)])


@dataclass(frozen=True)
class Circuit:
    """Ordered gate list over a fixed register."""
    n_qubits: int
    gates: tuple[Gate, ...]

    def __post_init__(self):
        seen_bits = set()
        for g in self.gates:
            if g.name not in _GATE_ARITY:
                raise PauliAlgebraError(f"unknown gate {g.name}")
            if len(g.qubits) != _GATE_ARITY[g.name]:
                raise PauliAlgebraError(f"{g.name} takes {_GATE_ARITY[g.name]} qubit(s)")
            for q in g.qubits:
                if not 0 <= q < self.n_qubits:
                    raise PauliAlgebraError(f"qubit {q} out of range")
            if g.name == "M":
                if g.bit is None:
                    raise PauliAlgebraError("measurement without bit label")
                if g.bit in seen_bits:
                    raise PauliAlgebraError(f"duplicate bit label {g.bit!r}")
                seen_bits.add(g.bit)
            if g.name == "CPAULI" and (g.bit is None or g.pauli not in "XYZ"):
                raise PauliAlgebraError("CPAULI needs a bit label and Pauli letter")

    def is_clifford(self) -> bool:
        return all(g.name in CLIFFORD_GATES for g in self.gates)

    def t_count(self) -> int:
        return sum(1 for g in self.gates if g.name == "T")

    def serialize(self) -> str:
        return "\n".join(g.render() for g in self.gates) + "\n"


def parse_circuit(text: str, n_qubits: int | None = None) -> Circuit:
    """Parse the one-gate-per-line format; '#' starts a comment."""
    gates: list[Gate] = []
    maxq = -1
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        name = toks[0].upper()
        try:
            if name == "M":
                if len(toks) != 4 or toks[2] != "->":
                    raise PauliAlgebraError("want: M q -> b")
                gates.append(Gate("M", (int(toks[1]),), bit=toks[3]))
            elif name == "CPAULI":
                if len(toks) != 4:
                    raise PauliAlgebraError("want: CPAULI b P q")
                gates.append(Gate("CPAULI", (int(toks[3]),), bit=toks[1],
                                  pauli=toks[2].upper()))
            elif name in _GATE_ARITY:
                qs = tuple(int(t) for t in toks[1:])
                gates.append(Gate(name, qs))
            else:
                raise PauliAlgebraError(f"unknown gate {name!r}")
        except (ValueError, PauliAlgebraError) as exc:
            raise PauliAlgebraError(f"line {lineno}: {exc}") from None
        maxq = max(maxq, *gates[-1].qubits)
    n = n_qubits if n_qubits is not None else maxq + 1
    return Circuit(n, tuple(gates))


# ---------------------------------------------------------------------------
# CliffordOp
# ---------------------------------------------------------------------------

class CliffordOp:
    """n-qubit Clifford unitary as a stabilizer tableau plus gate word.

    `x_images[i]` / `z_images[i]` are the conjugation images U X_i U^dag and
    U Z_i U^dag.  The tableau determines the channel exactly (two Cliffords
    with equal tableaux differ only by a global phase).
    """

    __slots__ = ("n_qubits", "x_images", "z_images", "gates")

    def __init__(self, n_qubits: int, x_images, z_images, gates):
        object.__setattr__(self, "n_qubits", n_qubits)
        object.__setattr__(self, "x_images", tuple(x_images))
        object.__setattr__(self, "z_images", tuple(z_images))
        object.__setattr__(self, "gates", tuple(gates))

    def __setattr__(self, *_):
        raise AttributeError("CliffordOp is immutable")

    # -- constructors ---------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> "CliffordOp":
        return cls.from_gates(n, [])

    @classmethod
    def from_gates(cls, n: int, gates: Iterable[tuple[str, tuple[int, ...]] | Gate]) -> "CliffordOp":
        norm: list[tuple[str, tuple[int, ...]]] = []
        for g in gates:
            if isinstance(g, Gate):
                norm.append((g.name, g.qubits))
            else:
                norm.append((g[0], tuple(g[1])))
        x = np.zeros((2 * n, n), np.uint8)
        z = np.zeros((2 * n, n), np.uint8)
        ph = np.zeros(2 * n, np.int64)
        for i in range(n):
            x[i, i] = 1
            z[n + i, i] = 1
        for name, qs in norm:
            _apply_gate_rows(x, z, ph, name, qs)
        xs = [PauliString(x[i], z[i], int(ph[i])) for i in range(n)]
        zs = [PauliString(x[n + i], z[n + i], int(ph[n + i])) for i in range(n)]
        return cls(n, xs, zs, norm)

    @classmethod
    def from_circuit(cls, circuit: Circuit) -> "CliffordOp":
        if not circuit.is_clifford():
            raise PauliAlgebraError("circuit contains non-Clifford elements")
        return cls.from_gates(circuit.n_qubits, [(g.name, g.qubits) for g in circuit.gates])

    @classmethod
    def from_pauli(cls, p: PauliString) -> "CliffordOp":
        gates = []
        for q in range(p.n_qubits):
            letter = p.restricted_letter(q)
            if letter != "I":
                gates.append((letter, (q,)))
        return cls.from_gates(p.n_qubits, gates)

    @classmethod
    def from_images(cls, x_images: list[PauliString], z_images: list[PauliString]) -> "CliffordOp":
        """Synthesize a gate word realizing the given target tableau."""
        gates = synthesize_tableau(x_images, z_images)
        op = cls.from_gates(x_images[0].n_qubits, gates)
        if list(op.x_images) != list(x_images) or list(op.z_images) != list(z_images):
            raise PauliAlgebraError("tableau synthesis failed to reproduce images")
        return op

    # -- core operations --------------------------------------------------

    def conjugate(self, p: PauliString) -> PauliString:
        """Return U p U^dag with exact phase."""
        if p.n_qubits != self.n_qubits:
            raise PauliAlgebraError("qubit count mismatch")
        acc = PauliString.identity(self.n_qubits)
        phase = p.phase
        for k in range(self.n_qubits):
            if p.x[k]:
                acc = acc * self.x_images[k]
            if p.z[k]:
                acc = acc * self.z_images[k]
        return PauliString(acc.x, acc.z, acc.phase + phase)

    def compose(self, first: "CliffordOp") -> "CliffordOp":
        """self o first (first applied first)."""
        if first.n_qubits != self.n_qubits:
            raise PauliAlgebraError("qubit count mismatch")
        xs = [self.conjugate(p) for p in first.x_images]
        zs = [self.conjugate(p) for p in first.z_images]
        return CliffordOp(self.n_qubits, xs, zs, first.gates + self.gates)

    def inverse(self) -> "CliffordOp":
        inv: list[tuple[str, tuple[int, ...]]] = []
        for name, qs in reversed(self.gates):
            inv.extend(_invert_gate(name, qs))
        return CliffordOp.from_gates(self.n_qubits, inv)

    def tensor(self, other: "CliffordOp") -> "CliffordOp":
        n = self.n_qubits + other.n_qubits
        gates = [(name, qs) for name, qs in self.gates]
        gates += [(name, tuple(q + self.n_qubits for q in qs)) for name, qs in other.gates]
        return CliffordOp.from_gates(n, gates)

    def embed(self, n: int, positions: Iterable[int]) -> "CliffordOp":
        pos = list(positions)
        gates = [(name, tuple(pos[q] for q in qs)) for name, qs in self.gates]
        return CliffordOp.from_gates(n, gates)

    def to_matrix(self) -> np.ndarray:
        from .states import gate_unitary  # local import; dense oracle lives there
        u = np.eye(2 ** self.n_qubits, dtype=complex)
        for name, qs in self.gates:
            u = gate_unitary(self.n_qubits, name, qs) @ u
        return u

    def is_identity_channel(self) -> bool:
        n = self.n_qubits
        return (self.x_images == tuple(PauliString.single(n, i, "X") for i in range(n))
                and self.z_images == tuple(PauliString.single(n, i, "Z") for i in range(n)))

    def __eq__(self, other) -> bool:
        """Channel equality: identical tableaux (global phase ignored)."""
        return (isinstance(other, CliffordOp)
                and self.n_qubits == other.n_qubits
                and self.x_images == other.x_images
                and self.z_images == other.z_images)

    def __hash__(self) -> int:
        return hash((self.n_qubits, self.x_images, self.z_images))

    def __repr__(self) -> str:
        return f"CliffordOp(n={self.n_qubits}, gates={len(self.gates)})"


def multiply(a: PauliString, b: PauliString) -> PauliString:
    """Product ab with exact phase."""
    return a * b


def conjugate(c: CliffordOp, p: PauliString) -> PauliString:
    """Key-transport map: the q with c.p = q.c as channels."""
    return c.conjugate(p)


def compose(c2: CliffordOp, c1: CliffordOp) -> CliffordOp:
    """c2 o c1."""
    return c2.compose(c1)


# ---------------------------------------------------------------------------
# Tableau synthesis and uniform random sampling
# ---------------------------------------------------------------------------

def _reduce_pair(x: np.ndarray, z: np.ndarray, ph: np.ndarray, k: int,
                 p_row: int, q_row: int) -> list[tuple[str, tuple[int, ...]]]:
    """Emit gates conjugating row p to +X_k and row q to +Z_k.

    Rows p/q must anticommute and act trivially below qubit k.  Gates are
    applied in place to the whole batch as they are emitted.
    """
    n = x.shape[1]
    gates: list[tuple[str, tuple[int, ...]]] = []

    def emit(name: str, *qs: int) -> None:
        gates.append((name, qs))
        _apply_gate_rows(x, z, ph, name, qs)

    # row p -> X-type on a single qubit
    for j in range(k, n):
        if x[p_row, j] and z[p_row, j]:
            emit("S", j)
    for j in range(k, n):
        if z[p_row, j]:
            emit("H", j)
    support = [j for j in range(k, n) if x[p_row, j]]
    if not support:
        raise PauliAlgebraError("cannot reduce identity row")
    if k not in support:
        emit("SWAP", k, support[0])
        support[0] = k
    for j in support:
        if j != k:
            emit("CNOT", k, j)
    # row q -> Z_k without disturbing X_k
    emit("H", k)
    if x[q_row, k] and z[q_row, k]:
        emit("S", k)
    for j in range(k + 1, n):
        if x[q_row, j] and z[q_row, j]:
            emit("S", j)
    for j in range(k + 1, n):
        if z[q_row, j]:
            emit("H", j)
    for j in range(k + 1, n):
        if x[q_row, j]:
            emit("CNOT", k, j)
    emit("H", k)
    # fix signs
    if ph[p_row] & 2:
        emit("Z", k)
    if ph[q_row] & 2:
        emit("X", k)
    return gates


def synthesize_tableau(x_images: list[PauliString],
                       z_images: list[PauliString]) -> list[tuple[str, tuple[int, ...]]]:
    """Gate word (application order) whose Clifford has the given tableau."""
    n = x_images[0].n_qubits
    if len(x_images) != n or len(z_images) != n:
        raise PauliAlgebraError("tableau needs n X-images and n Z-images")
    rows = list(x_images) + list(z_images)
    for r in rows:
        if not r.is_hermitian():
            raise PauliAlgebraError("tableau images must be Hermitian Paulis")
    for i in range(n):
        for j in range(n):
            if x_images[i].commutes(z_images[j]) != (i != j):
                raise PauliAlgebraError("images break X/Z commutation relations")
            if i < j and not (x_images[i].commutes(x_images[j])
                              and z_images[i].commutes(z_images[j])):
                raise PauliAlgebraError("images break commutation relations")
    x = np.stack([r.x for r in rows]).astype(np.uint8)
    z = np.stack([r.z for r in rows]).astype(np.uint8)
    ph = np.array([r.phase for r in rows], np.int64)
    reduction: list[tuple[str, tuple[int, ...]]] = []
    for k in range(n):
        reduction.extend(_reduce_pair(x, z, ph, k, k, n + k))
    gates: list[tuple[str, tuple[int, ...]]] = []
    for name, qs in reversed(reduction):
        gates.extend(_invert_gate(name, qs))
    return gates


def random_clifford(n: int, rng: np.random.Generator) -> CliffordOp:
    """Uniformly random n-qubit Clifford (up to global phase).

    Samples, for k = 0..n-1, a uniform anticommuting signed pair on the
    remaining qubits and reduces it to (X_k, Z_k); the inverted reduction
    words compose to a uniform group element (transitive-action argument).
    """
    if n < 1:
        raise PauliAlgebraError("n must be >= 1")
    reductions: list[list[tuple[str, tuple[int, ...]]]] = []
    for k in range(n):
        m = n - k
        while True:
            v1 = rng.integers(0, 2, size=2 * m, dtype=np.uint8)
            if v1.any():
                break
        while True:
            v2 = rng.integers(0, 2, size=2 * m, dtype=np.uint8)
            sp = int(np.sum((v1[:m] & v2[m:]) ^ (v1[m:] & v2[:m]))) % 2
            if sp == 1:
                break
        x = np.zeros((2, n), np.uint8)
        z = np.zeros((2, n), np.uint8)
        x[0, k:], z[0, k:] = v1[:m], v1[m:]
        x[1, k:], z[1, k:] = v2[:m], v2[m:]
        ph = np.zeros(2, np.int64)
        for r in range(2):
            ph[r] = int(np.sum(x[r] & z[r])) + 2 * int(rng.integers(0, 2))
        ph &= 3
        reductions.append(_reduce_pair(x, z, ph, k, 0, 1))
    gates: list[tuple[str, tuple[int, ...]]] = []
    for red in reversed(reductions):
        for name, qs in reversed(red):
            gates.extend(_invert_gate(name, qs))
    return CliffordOp.from_gates(n, gates)


def random_pauli(n: int, rng: np.random.Generator, phase_free: bool = True) -> PauliString:
    x = rng.integers(0, 2, size=n, dtype=np.uint8)
    z = rng.integers(0, 2, size=n, dtype=np.uint8)
    ph = int(np.sum(x & z))
    if not phase_free:
        ph += 2 * int(rng.integers(0, 2))
    return PauliString(x, z, ph)


def random_clifford_circuit(n: int, depth: int, rng: np.random.Generator) -> Circuit:
    """Random gate-word circuit (test-input generation, not uniform)."""
    gates: list[Gate] = []
    one_q = ["H", "S", "X", "Y", "Z"]
    two_q = ["CNOT", "CZ", "SWAP"]
    for _ in range(depth):
        if n >= 2 and rng.random() < 0.5:
            a, b = rng.choice(n, size=2, replace=False)
            gates.append(Gate(str(rng.choice(two_q)), (int(a), int(b))))
        else:
            gates.append(Gate(str(rng.choice(one_q)), (int(rng.integers(n)),)))
    return Circuit(n, tuple(gates))
