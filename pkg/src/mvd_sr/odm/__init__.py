from mvd_sr.odm.codec import (
    decode_odm,
    encode_odm,
    odm_path,
    read_odm,
    read_odm_set,
    write_odm,
    write_odm_set,
)
from mvd_sr.odm.maps import (
    Odm,
    OdmSet,
    check_set_resolution,
    extract_all,
    extract_odm,
    silhouette,
    upsample_odm_nn,
    upsample_set_nn,
    view_columns,
)
from mvd_sr.odm.views import Axis, Direction, ViewId

__all__ = [
    "Axis",
    "Direction",
    "Odm",
    "OdmSet",
    "ViewId",
    "check_set_resolution",
    "decode_odm",
    "encode_odm",
    "extract_all",
    "extract_odm",
    "odm_path",
    "read_odm",
    "read_odm_set",
    "silhouette",
    "upsample_odm_nn",
    "upsample_set_nn",
    "view_columns",
    "write_odm",
    "write_odm_set",
]
