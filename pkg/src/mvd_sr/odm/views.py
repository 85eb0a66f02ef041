from strenum import StrEnum


class Axis(StrEnum):
    X = "x"
    Y = "y"
    Z = "z"

    @property
    def index(self) -> int:
        return "xyz".index(self.value)


class Direction(StrEnum):
    POSITIVE = "positive"
    NEGATIVE = "negative"


class ViewId(StrEnum):
    """The six axis-aligned views, in file order X+, X-, Y+, Y-, Z+, Z-.

    A positive view looks from index 0 inward, a negative one from R - 1.
    Pixel (u, v) addresses the two remaining axes in (x, y, z) order.
    """

    X_POS = "xp"
    X_NEG = "xn"
    Y_POS = "yp"
    Y_NEG = "yn"
    Z_POS = "zp"
    Z_NEG = "zn"

    @property
    def axis(self) -> Axis:
        match self.value[0]:
            case "x":
                return Axis.X
            case "y":
                return Axis.Y
            case _:
                return Axis.Z

    @property
    def direction(self) -> Direction:
        return Direction.POSITIVE if self.value[1] == "p" else Direction.NEGATIVE

    @property
    def index(self) -> int:
        return list(ViewId).index(self)

    @property
    def side_value(self) -> float:
        """View identity fed to the networks as a constant channel."""
        return self.index / 5

    @property
    def opposite(self) -> "ViewId":
        return ViewId(self.value[0] + ("n" if self.value[1] == "p" else "p"))

    @classmethod
    def from_index(cls, index: int) -> "ViewId":
        return list(cls)[index]

