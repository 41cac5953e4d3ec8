"""Encode a random message at n=128, t=2, hit it with one row and one column
deletion, then decode and show what the decoder located."""

import numpy as np

from crisscross import channel, codec, gabidulin
from crisscross.channel import ChannelPattern

p = codec.make_params(128, 2)
gab = gabidulin.build(128, 2)
print("layout:", {k: v for k, v in p.summary().items() if k not in ("regions", "row_code")})

rng = np.random.default_rng(7)
msg = rng.integers(0, 2, codec.message_capacity(p), dtype=np.uint8)
X = codec.encode(p, gab, msg)

pattern = ChannelPattern("deletion", row_ops=[57], col_ops=[100])
Y = channel.apply(X, pattern)
print("received shape:", Y.shape)

C, recovered, report = codec.decode(p, gab, Y)
print("report:", report.to_json())
print("codeword restored:", C == X, "| message restored:", bool(np.array_equal(recovered, msg)))
