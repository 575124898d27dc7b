#!/usr/bin/env python3
"""Standalone MRC2014 writer used to produce the reference fixtures in this
directory. Written directly against the published format description
(1024-byte header, little-endian words) and kept independent of the C++
implementation so the fixtures act as a cross-check.

Run from this directory:  python3 gen_ref_mrc.py
"""
import struct
import numpy as np


def mrc_header(nx, ny, nz, mode, mx, my, mz, cella, mapcrs, dmin, dmax, dmean,
               ispg, rms, label=b"reference fixture"):
    h = bytearray(1024)
    struct.pack_into("<3i", h, 0, nx, ny, nz)            # words 1-3
    struct.pack_into("<i", h, 12, mode)                  # word 4
    struct.pack_into("<3i", h, 16, 0, 0, 0)              # nxstart..
    struct.pack_into("<3i", h, 28, mx, my, mz)           # words 8-10
    struct.pack_into("<3f", h, 40, *cella)               # words 11-13
    struct.pack_into("<3f", h, 52, 90.0, 90.0, 90.0)     # cellb
    struct.pack_into("<3i", h, 64, *mapcrs)              # words 17-19
    struct.pack_into("<3f", h, 76, dmin, dmax, dmean)    # words 20-22
    struct.pack_into("<i", h, 88, ispg)                  # word 23
    struct.pack_into("<i", h, 92, 0)                     # nsymbt
    struct.pack_into("<i", h, 108, 20140)                # nversion (word 28)
    struct.pack_into("<3f", h, 196, 0.0, 0.0, 0.0)       # origin (words 50-52)
    h[208:212] = b"MAP "                                 # word 53
    h[212:216] = bytes([0x44, 0x44, 0x00, 0x00])         # machine stamp, LE
    struct.pack_into("<f", h, 216, rms)                  # word 55
    struct.pack_into("<i", h, 220, 1)                    # nlabl
    h[224:224 + len(label)] = label
    return bytes(h)


def write_mrc(path, data, pixel, mode, ispg, mapcrs=(1, 2, 3), stack=False):
    # data indexed [section][row][column]
    nz, ny, nx = data.shape
    mz = 1 if stack else nz
    cella = (nx * pixel, ny * pixel, mz * pixel)
    getter = {0: np.int8, 1: np.int16, 2: np.float32, 6: np.uint16}[mode]
    raw = np.ascontiguousarray(data.astype(getter))
    asf = data.astype(np.float32)
    hdr = mrc_header(nx, ny, nz, mode, nx, ny, mz, cella, mapcrs,
                     float(asf.min()), float(asf.max()), float(asf.mean()),
                     ispg, float(asf.std()))
    with open(path, "wb") as f:
        f.write(hdr)
        f.write(raw.tobytes())
    print(f"{path}: {data.shape} mode={mode} ispg={ispg} mapcrs={mapcrs}")


def main():
    # 3-image 8x8 float stack, values exactly representable in float32
    k, j, i = np.meshgrid(np.arange(3), np.arange(8), np.arange(8),
                          indexing="ij")
    stack = (k * 64 + j * 8 + i) * 0.25
    write_mrc("ref_stack_3x8x8.mrc", stack, 1.25, mode=2, ispg=0, stack=True)

    # 4x4x4 float volume, ispg=1
    z, y, x = np.meshgrid(np.arange(4), np.arange(4), np.arange(4),
                          indexing="ij")
    vol = (z * 16 + y * 4 + x) * 0.5 - 10.0
    write_mrc("ref_vol_4.mrc", vol, 2.0, mode=2, ispg=1)

    # int16 stack to exercise mode conversion
    stack16 = (k * 64 + j * 8 + i) - 90
    write_mrc("ref_stack_mode1.mrc", stack16, 1.0, mode=1, ispg=0, stack=True)

    # volume stored with permuted axis order mapc/mapr/maps = (2,3,1):
    # file[s][r][c] = V[z=r][y=c][x=s] for canonical V of shape (nz=5,ny=4,nx=3)
    Vz, Vy, Vx = np.meshgrid(np.arange(5), np.arange(4), np.arange(3),
                             indexing="ij")
    V = (Vz * 100 + Vy * 10 + Vx).astype(np.float64)  # V[z][y][x]
    perm = np.transpose(V, (2, 0, 1))  # file[s=x][r=z][c=y] -> shape (3,5,4)
    write_mrc("ref_vol_permuted.mrc", perm, 1.0, mode=2, ispg=1,
              mapcrs=(2, 3, 1))


if __name__ == "__main__":
    main()
