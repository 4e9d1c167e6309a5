"""Matrices transcribed from the worked examples, guarded by checksums."""

from __future__ import annotations

import hashlib
from importlib import resources

from .gf2 import BitMatrix, gf2_inverse, parse_matrix

CHECKSUMS = {
    "lower_ones4": "eeee0c09efc401ea5c8012d29ca02ac6e8f900b173527f9bfe91fc9a46687066",
    "stuck5": "43730f596109489e1a10a8d1f2626795739f209d969b6168c7201b30e9034c23",
    "stuck5_inverse": "0649abdcd60f0222ed993954bd51391706ca306d91043385de0540a1a48a6132",
    "stuck5_cost16": "778bed5960cdbb4aa85201563a85b4b8f28afc930dbdf9da843a456a152449fa",
    "stuck5_cost16_inverse": "894aef929f74e32c56b27bd1440121943df1e2bf08f0e97fed83618b6e43e8b9",
    "stuck5_cost11": "44304cc6cbb2575a100a0075a9407351f031676f174229961e46b5a45e3e64af",
    "stuck5_cost11_inverse": "f2f7438004a8d64053ac4e5a435e939b402f5450bbb35a893947f2f3ed95be73",
    "stuck5_cost5": "2f2c1c5c0894641b365d4c8913486db08146b42b768a65473b718a60a06940d9",
    "stuck5_cost5_inverse": "874ca0d3111605e27d1c57990fbfe6dce038f216345b35080e51800b0770276d",
    "compare6": "e3ce25baed3040aad722836ac1a4b411b14f7a9999f9fa7b90d3e24c70f33a24",
    "compare6_relabelled": "a444de0c8014d41618e6b02064572656d9ce63774aa8301cad71523cf961d1ee",
    "bench16": "6f6b998ccefbdcfa9069305ba74cf99ddde4e9efa58130f5ce787f9da2eace6a",
}


def fixture_path(name: str):
    return resources.files("cnot_forge") / "data" / f"{name}.txt"


def load_fixture(name: str) -> BitMatrix:
    """Load a bundled matrix, checking its checksum and invertibility."""
    if name not in CHECKSUMS:
        raise KeyError(f"unknown fixture {name!r}; have {sorted(CHECKSUMS)}")
    raw = fixture_path(name).read_bytes()
    digest = hashlib.sha256(raw).hexdigest()
    if digest != CHECKSUMS[name]:
        raise ValueError(f"fixture {name} checksum mismatch: {digest}")
    m = parse_matrix(raw.decode())
    gf2_inverse(m)
    return m
