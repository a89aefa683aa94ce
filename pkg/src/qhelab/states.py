"""Two interchangeable state backends.

`StabilizerState` is a generator-list tableau simulator; a state on n
qubits may carry k < n generators, which encodes a mixed state (uniform
over the coset fixed by the group) -- that is exactly what maximally mixed
ancillas look like, so no purification bookkeeping is needed.

`DensityMatrix` is the exact dense oracle, capped at n = 6 so exhaustive
key sweeps stay fast.  The two backends are cross-checked against each
other in the test suite.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import gf2
from .paulis import Circuit, CliffordOp, PauliString

DENSE_QUBIT_CAP = 6

_INV_SQRT2 = 1.0 / np.sqrt(2.0)

_GATE_MATS: dict[str, np.ndarray] = {
    "H": _INV_SQRT2 * np.array([[1, 1], [1, -1]], dtype=complex),
    "S": np.array([[1, 0], [0, 1j]], dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
    "T": np.array([[1, 0], [0, np.exp(1j * np.pi / 4)]], dtype=complex),
    "CNOT": np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]],
                     dtype=complex),
    "CZ": np.diag([1, 1, 1, -1]).astype(complex),
    "SWAP": np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]],
                     dtype=complex),
}

_1Q_VECTORS = {
    "0": np.array([1, 0], dtype=complex),
    "1": np.array([0, 1], dtype=complex),
    "+": np.array([1, 1], dtype=complex) * _INV_SQRT2,
    "-": np.array([1, -1], dtype=complex) * _INV_SQRT2,
    "i": np.array([1, 1j], dtype=complex) * _INV_SQRT2,
    "m": np.array([1, -1j], dtype=complex) * _INV_SQRT2,
    "T": np.array([1, np.exp(1j * np.pi / 4)], dtype=complex) * _INV_SQRT2,
}

# stabilizer generator for the stabilizer-representable plaintext characters
_1Q_GENERATORS = {"0": "+Z", "1": "-Z", "+": "+X", "-": "-X", "i": "+Y", "m": "-Y"}


class BackendError(ValueError):
    pass


class ZeroProbabilityError(BackendError):
    """A forced measurement outcome had probability zero."""


@dataclass(frozen=True)
class MeasurementRecord:
    label: str
    outcome: int
    probability: float

    def __post_init__(self):
        if not 0.0 <= self.probability <= 1.0 + 1e-12:
            raise BackendError("probability outside [0, 1]")


def gate_unitary(n: int, name: str, qs: tuple[int, ...]) -> np.ndarray:
    """Dense 2^n x 2^n embedding of an elementary gate (qubit 0 = MSB)."""
    u = _GATE_MATS[name]
    k = len(qs)
    rest = [q for q in range(n) if q not in qs]
    full = np.kron(u, np.eye(2 ** (n - k), dtype=complex))
    order = list(qs) + rest
    axes = [order.index(q) for q in range(n)]
    t = full.reshape((2,) * (2 * n))
    t = t.transpose(axes + [n + a for a in axes])
    return np.ascontiguousarray(t.reshape(2 ** n, 2 ** n))


def statevector(spec: str) -> np.ndarray:
    """Product state vector from a character spec, e.g. '0+1' or 'T'."""
    v = np.array([1.0 + 0j])
    for ch in spec:
        if ch not in _1Q_VECTORS:
            raise BackendError(f"unknown state character {ch!r}")
        v = np.kron(v, _1Q_VECTORS[ch])
    return v


class StabilizerState:
    """Possibly-mixed stabilizer state: k <= n independent commuting
    signed generators; k < n leaves 2^(n-k)-fold residual mixedness."""

    __slots__ = ("n_qubits", "generators")

    def __init__(self, n_qubits: int, generators=(), validate: bool = True):
        gens = tuple(generators)
        object.__setattr__(self, "n_qubits", n_qubits)
        object.__setattr__(self, "generators", gens)
        if validate:
            self._validate()

    def __setattr__(self, *_):
        raise AttributeError("StabilizerState is immutable")

    def _validate(self) -> None:
        gens = self.generators
        if len(gens) > self.n_qubits:
            raise BackendError("more generators than qubits")
        for g in gens:
            if g.n_qubits != self.n_qubits:
                raise BackendError("generator size mismatch")
            if not g.is_hermitian():
                raise BackendError("generator must be Hermitian")
        for i in range(len(gens)):
            for j in range(i + 1, len(gens)):
                if not gens[i].commutes(gens[j]):
                    raise BackendError("generators must commute")
        if gens:
            mat = np.stack([g.symplectic() for g in gens])
            if gf2.rank(mat) != len(gens):
                raise BackendError("generators must be independent")

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, n: int) -> "StabilizerState":
        return cls(n, [PauliString.single(n, q, "Z") for q in range(n)], validate=False)

    @classmethod
    def maximally_mixed(cls, n: int) -> "StabilizerState":
        return cls(n, [], validate=False)

    @classmethod
    def product(cls, spec: str) -> "StabilizerState":
        """Product state from characters in '01+-im'; '*' marks a
        maximally mixed qubit."""
        n = len(spec)
        gens = []
        for q, ch in enumerate(spec):
            if ch == "*":
                continue
            if ch not in _1Q_GENERATORS:
                raise BackendError(f"not a stabilizer state character: {ch!r}")
            sign, letter = _1Q_GENERATORS[ch]
            gens.append(PauliString.single(n, q, letter,
                                           phase=0 if sign == "+" else 2))
        return cls(n, gens, validate=False)

    def tensor(self, other: "StabilizerState") -> "StabilizerState":
        n = self.n_qubits + other.n_qubits
        ident_other = PauliString.identity(other.n_qubits)
        ident_self = PauliString.identity(self.n_qubits)
        gens = [g.tensor(ident_other) for g in self.generators]
        gens += [ident_self.tensor(g) for g in other.generators]
        return StabilizerState(n, gens, validate=False)

    # -- group queries ----------------------------------------------------

    def contains(self, p: PauliString) -> tuple[bool, int]:
        """Is +/-p in the stabilizer group?  Returns (found, sign)."""
        pos = p.positive()
        if not self.generators:
            return (pos.weight() == 0, 1)
        mat = np.stack([g.symplectic() for g in self.generators]).T
        sol = gf2.solve(mat, pos.symplectic())
        if sol is None:
            return (False, 0)
        prod = PauliString.identity(self.n_qubits)
        for i, bit in enumerate(sol):
            if bit:
                prod = prod * self.generators[i]
        if prod == pos:
            return (True, 1)
        if prod == pos.negate():
            return (True, -1)
        raise BackendError("inconsistent stabilizer group phase")

    def expectation(self, p: PauliString) -> int:
        """<p> for a Hermitian Pauli: exactly one of -1, 0, +1."""
        pos = p.positive()
        sgn = p.sign()
        for g in self.generators:
            if not g.commutes(pos):
                return 0
        found, s = self.contains(pos)
        return s * sgn if found else 0

    # -- dynamics ---------------------------------------------------------

    def apply_clifford(self, c: CliffordOp) -> "StabilizerState":
        if c.n_qubits != self.n_qubits:
            raise BackendError("qubit count mismatch")
        return StabilizerState(self.n_qubits,
                               [c.conjugate(g) for g in self.generators],
                               validate=False)

    def apply_pauli(self, p: PauliString) -> "StabilizerState":
        # p g p^dag = +/- g depending on commutation
        gens = [g if p.commutes(g) else g.negate() for g in self.generators]
        return StabilizerState(self.n_qubits, gens, validate=False)

    def measure_pauli(self, k: PauliString, rng: np.random.Generator,
                      label: str = "m", force: int | None = None,
                      ) -> tuple["StabilizerState", MeasurementRecord]:
        if k.n_qubits != self.n_qubits:
            raise BackendError("qubit count mismatch")
        if not k.is_hermitian():
            raise BackendError("can only measure Hermitian Paulis")
        pos = k.positive()
        flip = 0 if k.sign() == 1 else 1
        anti = [i for i, g in enumerate(self.generators) if not g.commutes(pos)]
        if anti:
            # outcome is uniformly random; update generators
            o_pos = int(rng.integers(0, 2)) if force is None else (force ^ flip)
            pivot = anti[0]
            gens = list(self.generators)
            gp = gens[pivot]
            for i in anti[1:]:
                gens[i] = gens[i] * gp
            gens[pivot] = PauliString(pos.x, pos.z, pos.phase + 2 * o_pos)
            rec = MeasurementRecord(label, o_pos ^ flip, 0.5)
            return StabilizerState(self.n_qubits, gens, validate=False), rec
        found, sign = self.contains(pos)
        if found:
            o_pos = 0 if sign == 1 else 1
            outcome = o_pos ^ flip
            if force is not None and force != outcome:
                raise ZeroProbabilityError(
                    f"forced outcome {force} has probability 0")
            return self, MeasurementRecord(label, outcome, 1.0)
        # commutes with everything but not in the group: the mixed
        # directions contain k; outcome uniform, state purifies by one bit.
        o_pos = int(rng.integers(0, 2)) if force is None else (force ^ flip)
        gens = list(self.generators)
        gens.append(PauliString(pos.x, pos.z, pos.phase + 2 * o_pos))
        rec = MeasurementRecord(label, o_pos ^ flip, 0.5)
        return StabilizerState(self.n_qubits, gens, validate=False), rec

    def permute_qubits(self, perm: list[int]) -> "StabilizerState":
        """Relabel qubits: new qubit perm[q] carries old qubit q."""
        if sorted(perm) != list(range(self.n_qubits)):
            raise BackendError("perm must be a bijection on the register")
        gens = []
        inv = np.argsort(np.asarray(perm))
        for g in self.generators:
            gens.append(PauliString(g.x[inv], g.z[inv], g.phase))
        return StabilizerState(self.n_qubits, gens, validate=False)

    def discard_qubits(self, qs: list[int]) -> "StabilizerState":
        """Trace out the given qubits (exact stabilizer partial trace).

        Generators are Gaussian-eliminated over the discarded columns;
        pivots (the part of the group with support there) are dropped and
        the remainder is restricted to the kept qubits.
        """
        keep = [q for q in range(self.n_qubits) if q not in qs]
        gens = list(self.generators)
        for q in qs:
            for pick in ("x", "z"):
                pivot = None
                for i, g in enumerate(gens):
                    if (g.x[q] if pick == "x" else g.z[q]):
                        pivot = i
                        break
                if pivot is None:
                    continue
                piv = gens.pop(pivot)
                for i, g in enumerate(gens):
                    if (g.x[q] if pick == "x" else g.z[q]):
                        gens[i] = g * piv
        out = []
        for g in gens:
            if (g.x[qs].any() or g.z[qs].any()):
                raise BackendError("discard elimination left support behind")
            out.append(PauliString(g.x[keep], g.z[keep], g.phase))
        return StabilizerState(len(keep), out, validate=False)

    # -- extraction -------------------------------------------------------

    def reduced_density(self, qubits: list[int]) -> np.ndarray:
        """Exact reduced density matrix on a small subset of qubits."""
        s = len(qubits)
        if s > 3:
            raise BackendError("reduced_density supports at most 3 qubits")
        dim = 2 ** s
        rho = np.zeros((dim, dim), dtype=complex)
        for idx in range(4 ** s):
            letters = []
            rem = idx
            for _ in range(s):
                letters.append("IXYZ"[rem % 4])
                rem //= 4
            small = PauliString.from_label("".join(letters))
            big = small.embed(self.n_qubits, qubits)
            val = self.expectation(big)
            if val:
                rho += val * small.to_matrix()
        return rho / dim

    def to_density(self) -> "DensityMatrix":
        if self.n_qubits > DENSE_QUBIT_CAP:
            raise BackendError(f"dense oracle capped at {DENSE_QUBIT_CAP} qubits")
        dim = 2 ** self.n_qubits
        rho = np.eye(dim, dtype=complex)
        for g in self.generators:
            rho = rho @ (np.eye(dim) + g.to_matrix()) / 2.0
        return DensityMatrix(rho / 2 ** (self.n_qubits - len(self.generators)))

    def to_json(self) -> dict:
        return {"backend": "stabilizer", "n_qubits": self.n_qubits,
                "generators": [g.label() for g in self.generators]}

    @classmethod
    def from_json(cls, blob: dict) -> "StabilizerState":
        gens = [PauliString.from_label(s) for s in blob["generators"]]
        return cls(blob["n_qubits"], gens)

    def __repr__(self):
        return f"StabilizerState(n={self.n_qubits}, gens={[g.label() for g in self.generators]})"


class DensityMatrix:
    """Exact dense density operator, n <= 6 enforced."""

    __slots__ = ("n_qubits", "mat")

    def __init__(self, mat: np.ndarray, validate: bool = True):
        mat = np.asarray(mat, dtype=complex)
        dim = mat.shape[0]
        n = int(round(np.log2(dim)))
        if mat.shape != (dim, dim) or 2 ** n != dim:
            raise BackendError("density matrix must be square power-of-two")
        if n > DENSE_QUBIT_CAP:
            raise BackendError(f"dense oracle capped at {DENSE_QUBIT_CAP} qubits")
        object.__setattr__(self, "n_qubits", n)
        object.__setattr__(self, "mat", mat)
        self.mat.setflags(write=False)
        if validate:
            if abs(np.trace(mat) - 1.0) > 1e-12:
                raise BackendError("trace != 1")
            if np.max(np.abs(mat - mat.conj().T)) > 1e-12:
                raise BackendError("not Hermitian")
            if np.min(np.linalg.eigvalsh((mat + mat.conj().T) / 2)) < -1e-10:
                raise BackendError("not positive semidefinite")

    def __setattr__(self, *_):
        raise AttributeError("DensityMatrix is immutable")

    # -- constructors ---------------------------------------------------

    @classmethod
    def from_statevector(cls, v: np.ndarray) -> "DensityMatrix":
        v = np.asarray(v, dtype=complex)
        v = v / np.linalg.norm(v)
        return cls(np.outer(v, v.conj()), validate=False)

    @classmethod
    def product(cls, spec: str) -> "DensityMatrix":
        return cls.from_statevector(statevector(spec))

    @classmethod
    def maximally_mixed(cls, n: int) -> "DensityMatrix":
        return cls(np.eye(2 ** n, dtype=complex) / 2 ** n, validate=False)

    @classmethod
    def random_pure(cls, n: int, rng: np.random.Generator) -> "DensityMatrix":
        v = rng.normal(size=2 ** n) + 1j * rng.normal(size=2 ** n)
        return cls.from_statevector(v)

    # -- dynamics ---------------------------------------------------------

    def apply_unitary(self, u: np.ndarray) -> "DensityMatrix":
        return DensityMatrix(u @ self.mat @ u.conj().T, validate=False)

    def apply_gate(self, name: str, qs: tuple[int, ...]) -> "DensityMatrix":
        return self.apply_unitary(gate_unitary(self.n_qubits, name, qs))

    def apply_clifford(self, c: CliffordOp) -> "DensityMatrix":
        if c.n_qubits != self.n_qubits:
            raise BackendError("qubit count mismatch")
        out = self
        for name, qs in c.gates:
            out = out.apply_gate(name, qs)
        return out

    def apply_pauli(self, p: PauliString) -> "DensityMatrix":
        m = p.to_matrix()
        return self.apply_unitary(m)

    def measure_pauli(self, k: PauliString, rng: np.random.Generator,
                      label: str = "m", force: int | None = None,
                      ) -> tuple["DensityMatrix", MeasurementRecord]:
        if k.n_qubits != self.n_qubits:
            raise BackendError("qubit count mismatch")
        if not k.is_hermitian():
            raise BackendError("can only measure Hermitian Paulis")
        kmat = k.to_matrix()
        dim = kmat.shape[0]
        proj0 = (np.eye(dim) + kmat) / 2
        p0 = float(np.real(np.trace(proj0 @ self.mat)))
        p0 = min(max(p0, 0.0), 1.0)
        if force is not None:
            outcome = force
        else:
            outcome = 0 if rng.random() < p0 else 1
        prob = p0 if outcome == 0 else 1.0 - p0
        if prob < 1e-12:
            raise ZeroProbabilityError(f"outcome {outcome} has probability ~0")
        proj = proj0 if outcome == 0 else (np.eye(dim) - kmat) / 2
        post = proj @ self.mat @ proj / prob
        return (DensityMatrix(post, validate=False),
                MeasurementRecord(label, outcome, prob))

    def permute_qubits(self, perm: list[int]) -> "DensityMatrix":
        """Relabel qubits: new qubit perm[q] carries old qubit q."""
        n = self.n_qubits
        if sorted(perm) != list(range(n)):
            raise BackendError("perm must be a bijection on the register")
        t = self.mat.reshape((2,) * (2 * n))
        inv = list(np.argsort(np.asarray(perm)))
        t = t.transpose(inv + [n + a for a in inv])
        return DensityMatrix(t.reshape(2 ** n, 2 ** n), validate=False)

    # -- extraction -------------------------------------------------------

    def partial_trace(self, keep: list[int]) -> "DensityMatrix":
        n = self.n_qubits
        if sorted(keep) != list(keep):
            raise BackendError("partial_trace keeps qubits in register order")
        drop = [q for q in range(n) if q not in keep]
        t = self.mat.reshape((2,) * (2 * n))
        for q in sorted(drop, reverse=True):
            t = np.trace(t, axis1=q, axis2=q + (t.ndim // 2))
        return DensityMatrix(t.reshape(2 ** len(keep), 2 ** len(keep)),
                             validate=False)

    def tensor(self, other: "DensityMatrix") -> "DensityMatrix":
        return DensityMatrix(np.kron(self.mat, other.mat), validate=False)

    def expectation(self, p: PauliString) -> float:
        return float(np.real(np.trace(p.to_matrix() @ self.mat)))

    def to_json(self) -> dict:
        flat = [[float(v.real), float(v.imag)] for v in self.mat.reshape(-1)]
        return {"backend": "dense", "n_qubits": self.n_qubits, "matrix": flat}

    @classmethod
    def from_json(cls, blob: dict) -> "DensityMatrix":
        dim = 2 ** blob["n_qubits"]
        vals = np.array([complex(re, im) for re, im in blob["matrix"]])
        return cls(vals.reshape(dim, dim))

    def __repr__(self):
        return f"DensityMatrix(n={self.n_qubits})"


def trace_distance(a, b) -> float:
    """(1/2)||a - b||_1 via eigenvalues of the Hermitian difference."""
    amat = a.mat if isinstance(a, DensityMatrix) else np.asarray(a)
    bmat = b.mat if isinstance(b, DensityMatrix) else np.asarray(b)
    if amat.shape != bmat.shape:
        raise BackendError("dimension mismatch")
    diff = amat - bmat
    eig = np.linalg.eigvalsh((diff + diff.conj().T) / 2)
    return float(0.5 * np.sum(np.abs(eig)))


def to_density(state: StabilizerState) -> DensityMatrix:
    return state.to_density()


def evaluate_circuit(state, circuit: Circuit, rng: np.random.Generator,
                     forced: dict[str, int] | None = None,
                     allow_t: bool = False):
    """Run a circuit on either backend.

    Returns (state, records dict).  T markers are only legal on the dense
    backend with allow_t=True (plain-evaluation references); encrypted
    T handling lives in the scheme modules.
    """
    forced = forced or {}
    records: dict[str, MeasurementRecord] = {}
    for g in circuit.gates:
        if g.name == "M":
            zq = PauliString.single(circuit.n_qubits, g.qubits[0], "Z")
            state, rec = state.measure_pauli(
                zq, rng, label=g.bit, force=forced.get(g.bit))
            records[g.bit] = rec
        elif g.name == "CPAULI":
            if g.bit not in records:
                raise BackendError(f"CPAULI references unmeasured bit {g.bit!r}")
            if records[g.bit].outcome:
                p = PauliString.single(circuit.n_qubits, g.qubits[0], g.pauli)
                state = state.apply_pauli(p)
        elif g.name == "T":
            if not (allow_t and isinstance(state, DensityMatrix)):
                raise BackendError("T gate requires the dense reference path")
            state = state.apply_gate("T", g.qubits)
        else:
            if isinstance(state, DensityMatrix):
                state = state.apply_gate(g.name, g.qubits)
            else:
                op = CliffordOp.from_gates(circuit.n_qubits, [(g.name, g.qubits)])
                state = state.apply_clifford(op)
    return state, records
