import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from hbce.pnm import PNMError, read_pnm, write_pgm, write_ppm


class TestPnm:
    @settings(max_examples=50, deadline=None)
    @given(st.sampled_from([255, 65535, 1000]), st.data())
    def test_pgm_roundtrip(self, tmp_path_factory, maxval, data):
        pixels = data.draw(arrays(np.int64, st.tuples(st.integers(1, 9), st.integers(1, 9)),
                                  elements=st.integers(0, maxval)))
        path = tmp_path_factory.mktemp("pgm") / "x.pgm"
        write_pgm(path, pixels, maxval)
        back, mv = read_pnm(path)
        assert mv == maxval
        np.testing.assert_array_equal(back, pixels)

    def test_ppm_roundtrip(self, tmp_path, rng):
        pixels = rng.integers(0, 256, (3, 5, 3))
        write_ppm(tmp_path / "x.ppm", pixels)
        back, _ = read_pnm(tmp_path / "x.ppm")
        np.testing.assert_array_equal(back, pixels)

    def test_sixteen_bit_big_endian(self, tmp_path):
        write_pgm(tmp_path / "x.pgm", np.array([[258]]), 65535)
        assert (tmp_path / "x.pgm").read_bytes().endswith(b"\x01\x02")

    def test_header_comments(self, tmp_path):
        (tmp_path / "c.pgm").write_bytes(b"P5\n# made by hand\n2 1\n255\n\x00\xff")
        pixels, _ = read_pnm(tmp_path / "c.pgm")
        np.testing.assert_array_equal(pixels, [[0, 255]])

    def test_truncated_raster(self, tmp_path):
        write_pgm(tmp_path / "x.pgm", np.zeros((4, 4), dtype=int))
        buf = (tmp_path / "x.pgm").read_bytes()
        for cut in range(len(buf)):
            (tmp_path / "t.pgm").write_bytes(buf[:cut])
            with pytest.raises(PNMError):
                read_pnm(tmp_path / "t.pgm")

    def test_bad_magic(self, tmp_path):
        (tmp_path / "x.pgm").write_bytes(b"P2\n1 1\n255\n0")
        with pytest.raises(PNMError):
            read_pnm(tmp_path / "x.pgm")

    def test_out_of_range(self, tmp_path):
        with pytest.raises(PNMError):
            write_pgm(tmp_path / "x.pgm", np.array([[256]]), 255)
