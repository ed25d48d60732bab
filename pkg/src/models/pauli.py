"""Pauli strings and Pauli sums: the elements of the algebra of 2^w x 2^w matrices.

Representation
--------------
A ``PauliString`` stores ``i**phase * prod_j X_j^{x_j} Z_j^{z_j}`` where, per
qubit, the X factor sits left of the Z factor. Y is therefore not a primitive:
``Y = i X Z``. Qubit ``q`` of a width-``w`` register is bit ``1 << (w - q)`` of
both masks, which is also its bit in computational-basis indices (qubit 1 is
the most significant tensor factor).

A ``PauliSum`` maps phaseless keys ``(x_mask, z_mask)`` to complex coefficients.
"""

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Dict, Iterator, Mapping, Tuple, Union

PauliKey = Tuple[int, int]

_PHASE_PREFIX = {0: "+", 1: "+i", 2: "-", 3: "-i"}
_PREFIX_PHASE = {"": 0, "+": 0, "+i": 1, "i": 1, "-": 2, "-i": 3}


def qubit_bit(width: int, qubit: int) -> int:
    """Mask bit of a 1-based qubit index in a register of the given width."""
    return 1 << (width - qubit)


def _split_prefix(label: str) -> Tuple[int, str]:
    """Split an optional phase prefix (+, -, +i, -i, i) from a Pauli label."""
    for prefix in ("+i", "-i", "+", "-", "i"):
        if label.startswith(prefix) and label[len(prefix):].isalpha():
            return _PREFIX_PHASE[prefix], label[len(prefix):]
    return 0, label


def _masks_from_letters(letters: str) -> Tuple[int, int, int]:
    """Masks and number of Y letters for a Hermitian letter string such as 'XIYZ'."""
    width = len(letters)
    x_mask = z_mask = n_y = 0
    for position, letter in enumerate(letters.upper(), start=1):
        bit = qubit_bit(width, position)
        if letter == "X":
            x_mask |= bit
        elif letter == "Z":
            z_mask |= bit
        elif letter == "Y":
            x_mask |= bit
            z_mask |= bit
            n_y += 1
        elif letter != "I":
            raise ValueError(f"Invalid Pauli letter {letter!r} in {letters!r}")
    return x_mask, z_mask, n_y


def _letters_from_masks(width: int, x_mask: int, z_mask: int) -> Tuple[str, int]:
    """Hermitian letters for a key, plus the number of Y letters."""
    letters = []
    n_y = 0
    for qubit in range(1, width + 1):
        bit = qubit_bit(width, qubit)
        has_x, has_z = bool(x_mask & bit), bool(z_mask & bit)
        if has_x and has_z:
            letters.append("Y")
            n_y += 1
        elif has_x:
            letters.append("X")
        elif has_z:
            letters.append("Z")
        else:
            letters.append("I")
    return "".join(letters), n_y


@dataclass(frozen=True, slots=True)
class PauliString:
    """A signed tensor product of single-qubit Paulis.

    Attributes:
        width: Number of qubits
        phase: Exponent k of the global factor i**k, in 0..3
        x_mask: Qubits carrying an X factor
        z_mask: Qubits carrying a Z factor
    """
    width: int
    phase: int
    x_mask: int
    z_mask: int

    def __post_init__(self):
        if self.width < 1:
            raise ValueError(f"PauliString width must be positive, got {self.width}")
        limit = 1 << self.width
        if not (0 <= self.x_mask < limit and 0 <= self.z_mask < limit):
            raise ValueError(f"Pauli masks must have exactly {self.width} bits")
        object.__setattr__(self, "phase", self.phase % 4)

    @classmethod
    def identity(cls, width: int) -> "PauliString":
        return cls(width, 0, 0, 0)

    @classmethod
    def single(cls, width: int, qubit: int, letter: str) -> "PauliString":
        """One Hermitian Pauli letter on one qubit, identity elsewhere."""
        letters = ["I"] * width
        letters[qubit - 1] = letter
        return cls.from_label("".join(letters))

    @classmethod
    def from_label(cls, label: str) -> "PauliString":
        """Parse labels like 'XZ', '-iYI' (Hermitian letters, qubit 1 leftmost)."""
        phase, letters = _split_prefix(label)
        x_mask, z_mask, n_y = _masks_from_letters(letters)
        # Y = iXZ, so each Y contributes one factor of i to the canonical phase
        return cls(len(letters), phase + n_y, x_mask, z_mask)

    @property
    def key(self) -> PauliKey:
        return (self.x_mask, self.z_mask)

    @property
    def phase_value(self) -> complex:
        return 1j ** self.phase

    @property
    def is_identity(self) -> bool:
        return self.x_mask == 0 and self.z_mask == 0

    def to_label(self) -> str:
        """Render with Hermitian letters, e.g. X·Z becomes '-iY'."""
        letters, n_y = _letters_from_masks(self.width, self.x_mask, self.z_mask)
        return _PHASE_PREFIX[(self.phase - n_y) % 4] + letters

    def __str__(self) -> str:
        return self.to_label()


@dataclass(frozen=True, eq=False)
class PauliSum:
    """A finite complex-linear combination of phaseless Pauli keys.

    Attributes:
        width: Number of qubits shared by every key
        terms: Read-only mapping (x_mask, z_mask) -> coefficient; never holds an exact 0
    """
    width: int
    terms: Mapping[PauliKey, complex] = field(default_factory=dict)

    def __post_init__(self):
        if self.width < 1:
            raise ValueError(f"PauliSum width must be positive, got {self.width}")
        limit = 1 << self.width
        cleaned: Dict[PauliKey, complex] = {}
        for (x_mask, z_mask), coefficient in self.terms.items():
            if not (0 <= x_mask < limit and 0 <= z_mask < limit):
                raise ValueError(f"Pauli key {(x_mask, z_mask)} does not fit width {self.width}")
            coefficient = complex(coefficient)
            if coefficient != 0:
                cleaned[(x_mask, z_mask)] = coefficient
        object.__setattr__(self, "terms", MappingProxyType(cleaned))

    # ---- constructors -------------------------------------------------

    @classmethod
    def zero(cls, width: int) -> "PauliSum":
        return cls(width, {})

    @classmethod
    def identity(cls, width: int, coefficient: complex = 1.0) -> "PauliSum":
        return cls(width, {(0, 0): coefficient})

    @classmethod
    def from_string(cls, string: PauliString, coefficient: complex = 1.0) -> "PauliSum":
        """Lift a signed PauliString into a one-term sum."""
        return cls(string.width, {string.key: coefficient * string.phase_value})

    @classmethod
    def from_label(cls, label: str, coefficient: complex = 1.0) -> "PauliSum":
        return cls.from_string(PauliString.from_label(label), coefficient)

    @classmethod
    def from_labels(cls, labels: Mapping[str, complex]) -> "PauliSum":
        """Build a sum such as {'II': 2, 'XX': 1, 'YY': -1} (all labels equal width)."""
        widths = {len(_split_prefix(label)[1]) for label in labels}
        if len(widths) != 1:
            raise ValueError(f"Labels must share one width, got {sorted(widths)}")
        total = cls.zero(widths.pop())
        for label, coefficient in labels.items():
            total = total + cls.from_label(label, coefficient)
        return total

    # ---- accessors ----------------------------------------------------

    def coefficient(self, key: Union[PauliKey, str]) -> complex:
        """Coefficient of a canonical key, or of a Hermitian label such as 'ZI'."""
        if isinstance(key, str):
            string = PauliString.from_label(key)
            # label = phase * K, so the coefficient of the label is c_K / phase
            return self.terms.get(string.key, 0j) / string.phase_value
        return self.terms.get(key, 0j)

    def items(self) -> Iterator[Tuple[PauliKey, complex]]:
        return iter(self.terms.items())

    def __len__(self) -> int:
        return len(self.terms)

    def to_labels(self) -> Dict[str, complex]:
        """Coefficients keyed by Hermitian labels, the inverse of from_labels."""
        result = {}
        for (x_mask, z_mask), coefficient in self.terms.items():
            letters, n_y = _letters_from_masks(self.width, x_mask, z_mask)
            # c * K = c * (-i)^n_y * letters
            result[letters] = coefficient * (-1j) ** n_y
        return result

    # ---- arithmetic ---------------------------------------------------

    def _require_width(self, other: "PauliSum") -> None:
        if other.width != self.width:
            from src.models.errors import WidthMismatchError
            raise WidthMismatchError(f"width {self.width} vs {other.width}")

    def __add__(self, other: "PauliSum") -> "PauliSum":
        self._require_width(other)
        merged = dict(self.terms)
        for key, coefficient in other.terms.items():
            merged[key] = merged.get(key, 0j) + coefficient
        return PauliSum(self.width, merged)

    def __neg__(self) -> "PauliSum":
        return self * -1

    def __sub__(self, other: "PauliSum") -> "PauliSum":
        return self + (-other)

    def __mul__(self, scalar: complex) -> "PauliSum":
        return PauliSum(self.width, {k: c * scalar for k, c in self.terms.items()})

    __rmul__ = __mul__

    def __truediv__(self, scalar: complex) -> "PauliSum":
        return self * (1 / scalar)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PauliSum):
            return NotImplemented
        return self.width == other.width and dict(self.terms) == dict(other.terms)

    __hash__ = None

    def is_close(self, other: "PauliSum", atol: float = 1e-12) -> bool:
        """Coefficient-wise comparison within an absolute tolerance."""
        if self.width != other.width:
            return False
        keys = set(self.terms) | set(other.terms)
        return all(abs(self.coefficient(k) - other.coefficient(k)) <= atol for k in keys)

    def __repr__(self) -> str:
        body = " ".join(f"{c:+.6g}*{label}" for label, c in sorted(self.to_labels().items()))
        return f"PauliSum(w={self.width}: {body or '0'})"
