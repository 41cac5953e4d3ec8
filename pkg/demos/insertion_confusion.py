"""Duplicate a row of a codeword so the inserted copy blends in with its
neighbour.  The decoder cannot tell which copy is new; it reports a
confusion window, erases the original rows inside it and still decodes."""

import numpy as np

from crisscross import channel, codec, gabidulin
from crisscross.channel import ChannelPattern

p = codec.make_params(64, 1)
gab = gabidulin.build(64, 1)
msg = np.random.default_rng(3).integers(0, 2, codec.message_capacity(p), dtype=np.uint8)
X = codec.encode(p, gab, msg)

row = 30
pattern = ChannelPattern("insertion", row_ops=[(row, X.bits[row].tolist())])
Y = channel.apply(X, pattern)

C, recovered, report = codec.decode(p, gab, Y)
print("confusions:", report.confusions)
print("erasures used:", report.erasures_used)
print("decoded ok:", C == X and bool(np.array_equal(recovered, msg)))
