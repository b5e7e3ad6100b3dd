"""Offline oracle: EPSG:32654 reference coordinates and WGS84 geodesic distances.

Run once with pyproj installed; the printed values are frozen into the C++ tests.
"""
from pyproj import Geod, Transformer

POINTS = [
    (0.0, 141.0),
    (35.6895, 139.6917),
    (35.0, 139.7),
    (36.5, 140.2),
    (34.2, 141.8),
    (38.26, 140.87),
    (43.06, 141.35),
    (33.5, 138.9),
    (40.0, 143.5),
    (-10.0, 139.0),
    (60.0, 142.3),
]

PAIRS = [
    ((35.0, 139.7), (35.001, 139.7)),
    ((35.6895, 139.6917), (35.6935, 139.6987)),
    ((35.2, 139.72), (35.2031, 139.7262)),
    ((35.0, 139.7), (35.0, 139.709)),
]


def main():
    tf = Transformer.from_crs("EPSG:4326", "EPSG:32654", always_xy=True)
    for lat, lon in POINTS:
        e, n = tf.transform(lon, lat)
        print(f"{{{lat!r}, {lon!r}, {e:.4f}, {n:.4f}}},")
    geod = Geod(ellps="WGS84")
    for (la1, lo1), (la2, lo2) in PAIRS:
        _, _, d = geod.inv(lo1, la1, lo2, la2)
        print(f"{{{la1}, {lo1}, {la2}, {lo2}, {d:.6f}}},")


if __name__ == "__main__":
    main()
