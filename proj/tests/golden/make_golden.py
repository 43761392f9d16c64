#!/usr/bin/env python3
"""Independent reference for the bit-exact wire formats.

Regenerates the golden files next to this script. Uses the reedsolo package
(GF(2^8), 0x11D, generator 2, first root alpha^0) and zlib's CRC-32; the
splitmix64 shuffle and filler stream are re-implemented here from their
definitions.
"""
import os
import struct
import zlib

import reedsolo

HERE = os.path.dirname(os.path.abspath(__file__))
MASK = (1 << 64) - 1
FILLER_DOMAIN = 0x66696C6C65722D31


class SplitMix64:
    def __init__(self, seed):
        self.state = seed & MASK

    def next(self):
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
        return z ^ (z >> 31)

    def below(self, bound):
        threshold = (1 << 64) % bound
        while True:
            x = self.next()
            if x >= threshold:
                return x % bound


def permutation(n, seed):
    perm = list(range(n))
    rng = SplitMix64(seed)
    for i in range(n - 1, 0, -1):
        j = rng.below(i + 1)
        perm[i], perm[j] = perm[j], perm[i]
    return perm


def rs_encode(payload, parity):
    framed = struct.pack(">II", len(payload), zlib.crc32(payload)) + payload
    codec = reedsolo.RSCodec(parity, nsize=255, fcr=0, prim=0x11D, generator=2, c_exp=8)
    out = bytearray()
    k = 255 - parity
    for off in range(0, len(framed), k):
        out += codec.encode(framed[off:off + k])
    return bytes(out)


def scatter(coded, perm, capacity_bits, seed):
    slots = capacity_bits // 8
    bits = [0] * capacity_bits
    occupied = [False] * slots
    for b, byte in enumerate(coded):
        slot = perm[b]
        occupied[slot] = True
        for k in range(8):
            bits[slot * 8 + k] = (byte >> (7 - k)) & 1
    rng = SplitMix64(seed ^ FILLER_DOMAIN)
    word, left = 0, 0
    for pos in range(capacity_bits):
        if pos // 8 < slots and occupied[pos // 8]:
            continue
        if left == 0:
            word, left = rng.next(), 64
        bits[pos] = word >> 63
        word = (word << 1) & MASK
        left -= 1
    return bits


def write_lines(name, values):
    with open(os.path.join(HERE, name), "w") as f:
        for v in values:
            f.write(f"{v}\n")


def main():
    write_lines("perm_n8_seed1.txt", permutation(8, 1))
    write_lines("perm_n1000_seed3735928559.txt", permutation(1000, 0xDEADBEEF))

    short = b"Hello, shot noise!"
    with open(os.path.join(HERE, "coded_hello_p8.hex"), "w") as f:
        f.write(rs_encode(short, 8).hex() + "\n")

    long_payload = bytes((i * 7 + 3) & 0xFF for i in range(600))
    with open(os.path.join(HERE, "coded_600_p16.hex"), "w") as f:
        f.write(rs_encode(long_payload, 16).hex() + "\n")

    coded = rs_encode(short, 8)
    capacity = 8 * (len(coded) + 5) + 3
    perm = permutation(capacity // 8, 42)
    bits = scatter(coded, perm, capacity, 42)
    with open(os.path.join(HERE, "scatter_hello_p8_seed42.txt"), "w") as f:
        f.write(f"{capacity}\n" + "".join(map(str, bits)) + "\n")


if __name__ == "__main__":
    main()
