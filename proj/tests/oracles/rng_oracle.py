#!/usr/bin/env python3
# Copyright 2026 The asrprobe Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Independent reference for the stream RNG: SplitMix64 seeding of a
xoshiro256** generator, FNV-1a string hashing and stream-key derivation.
Prints the constants frozen into tests/unit/test_rng.cpp."""

M = (1 << 64) - 1


def mix64(z):
    z = (z + 0x9E3779B97F4A7C15) & M
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & M
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & M
    return z ^ (z >> 31)


def fnv1a(s):
    h = 0xCBF29CE484222325
    for b in s.encode():
        h = ((h ^ b) * 0x100000001B3) & M
    return h


def derive(seed, utt, tag, extra=()):
    k = mix64(seed)
    k = mix64(k ^ fnv1a(utt))
    k = mix64(k ^ fnv1a(tag))
    for w in extra:
        k = mix64(k ^ w)
    return k


def rotl(x, k):
    return ((x << k) | (x >> (64 - k))) & M


class Xoshiro:
    def __init__(self, key):
        self.s = []
        z = key
        for _ in range(4):
            z = (z + 0x9E3779B97F4A7C15) & M
            self.s.append(mix64(z))

    def next(self):
        s = self.s
        result = (rotl((s[1] * 5) & M, 7) * 9) & M
        t = (s[1] << 17) & M
        s[2] ^= s[0]
        s[3] ^= s[1]
        s[1] ^= s[2]
        s[0] ^= s[3]
        s[2] ^= t
        s[3] = rotl(s[3], 45)
        return result


if __name__ == "__main__":
    print("mix64(0) = 0x%016x" % mix64(0))
    print("fnv1a('') = 0x%016x, fnv1a('a') = 0x%016x" % (fnv1a(""), fnv1a("a")))
    print("derive(7,'utt1','perturb/white-noise') = 0x%016x" % derive(7, "utt1", "perturb/white-noise"))
    print("derive(7,'utt1','probe/injection',(3,1)) = 0x%016x" % derive(7, "utt1", "probe/injection", (3, 1)))
    for key in (0, 42):
        g = Xoshiro(key)
        print("key %d:" % key, ", ".join("0x%016x" % g.next() for _ in range(4)))
    g = Xoshiro(42)
    print("uniform(42)[0] = %.17g" % ((g.next() >> 11) * 2.0 ** -53))
