// Zhang-Suen thinning with sequential re-verification of each deletion, then
// passes that break up remaining 2x2 blocks and staircase corners.
//
// Plain parallel Zhang-Suen can erase 2-pixel-thick strokes (and whole 2x2
// components) because both sides are deleted in the same sub-iteration.
// Candidates are therefore marked in parallel but deleted one at a time, each
// re-checked against the current image, which makes every deletion a simple
// point and keeps 8-connected components intact.

#include <array>

#include "trailroute/raster.hpp"

namespace trailroute {

namespace {

// Neighbour ring P2..P9, clockwise starting north.
constexpr std::array<std::array<int, 2>, 8> kRing{{
    {-1, 0}, {-1, 1}, {0, 1}, {1, 1}, {1, 0}, {1, -1}, {0, -1}, {-1, -1},
}};

std::array<bool, 8> ring(const BinaryRaster& img, int r, int c) {
    std::array<bool, 8> p{};
    for (int i = 0; i < 8; ++i) p[i] = img.get(r + kRing[i][0], c + kRing[i][1]);
    return p;
}

bool zhang_suen_deletable(const BinaryRaster& img, int r, int c, int sub) {
    const auto p = ring(img, r, c);
    int b = 0;
    int a = 0;
    for (int i = 0; i < 8; ++i) {
        b += p[i] ? 1 : 0;
        if (!p[i] && p[(i + 1) % 8]) ++a;
    }
    if (b < 2 || b > 6 || a != 1) return false;
    const bool n = p[0], e = p[2], s = p[4], w = p[6];
    if (sub == 0) return !(n && e && s) && !(e && s && w);
    return !(n && e && w) && !(n && s && w);
}

bool zhang_suen_pass(BinaryRaster& img) {
    bool changed = false;
    std::vector<Pixel> candidates;
    for (int sub = 0; sub < 2; ++sub) {
        candidates.clear();
        for (int r = 0; r < img.height(); ++r) {
            for (int c = 0; c < img.width(); ++c) {
                if (img.at(r, c) && zhang_suen_deletable(img, r, c, sub)) candidates.push_back({r, c});
            }
        }
        for (const Pixel& p : candidates) {
            if (zhang_suen_deletable(img, p.row, p.col, sub)) {
                img.set(p, false);
                changed = true;
            }
        }
    }
    return changed;
}

// True when the foreground pixels of the 8-neighbourhood form exactly one
// 8-connected group, i.e. removing the centre cannot split its component.
bool single_neighbour_group(const BinaryRaster& img, int r, int c) {
    const auto p = ring(img, r, c);
    std::array<int, 8> group{};
    group.fill(-1);
    int groups = 0;
    for (int i = 0; i < 8; ++i) {
        if (!p[i] || group[i] >= 0) continue;
        group[i] = groups;
        std::array<int, 8> stack{};
        int top = 0;
        stack[top++] = i;
        while (top > 0) {
            const int k = stack[--top];
            for (int j = 0; j < 8; ++j) {
                if (!p[j] || group[j] >= 0) continue;
                const int dr = kRing[k][0] - kRing[j][0];
                const int dc = kRing[k][1] - kRing[j][1];
                if (dr >= -1 && dr <= 1 && dc >= -1 && dc <= 1) {
                    group[j] = groups;
                    stack[top++] = j;
                }
            }
        }
        ++groups;
    }
    return groups == 1;
}

bool completes_block(const BinaryRaster& img, int r, int c) {
    for (int dr = -1; dr <= 0; ++dr) {
        for (int dc = -1; dc <= 0; ++dc) {
            const int r0 = r + dr, c0 = c + dc;
            if (img.get(r0, c0) && img.get(r0, c0 + 1) && img.get(r0 + 1, c0) && img.get(r0 + 1, c0 + 1)) {
                return true;
            }
        }
    }
    return false;
}

// Resolve every 2x2 foreground block. Preferably one block pixel is removed;
// when each of the four anchors a private diagonal arm (the "X" pattern), one
// pixel is moved onto a flank instead, staying inside `allowed`.
bool break_blocks(BinaryRaster& img, const BinaryRaster& allowed) {
    bool changed = false;
    for (int r = 0; r + 1 < img.height(); ++r) {
        for (int c = 0; c + 1 < img.width(); ++c) {
            if (!(img.at(r, c) && img.at(r, c + 1) && img.at(r + 1, c) && img.at(r + 1, c + 1))) continue;

            // Block pixels with their outward diagonal direction.
            const std::array<std::array<int, 4>, 4> block{{
                {r, c, -1, -1}, {r, c + 1, -1, 1}, {r + 1, c, 1, -1}, {r + 1, c + 1, 1, 1},
            }};
            bool fixed = false;
            for (const auto& b : block) {
                if (single_neighbour_group(img, b[0], b[1])) {
                    img.set(b[0], b[1], false);
                    fixed = true;
                    break;
                }
            }
            for (std::size_t i = 0; i < block.size() && !fixed; ++i) {
                const auto& b = block[i];
                const std::array<Pixel, 2> flanks{Pixel{b[0] + b[2], b[1]}, Pixel{b[0], b[1] + b[3]}};
                for (const Pixel f : flanks) {
                    if (!img.contains(f.row, f.col) || !allowed.at(f) || img.at(f)) continue;
                    img.set(b[0], b[1], false);
                    img.set(f, true);
                    if (!completes_block(img, f.row, f.col)) {
                        fixed = true;
                        break;
                    }
                    img.set(f, false);
                    img.set(b[0], b[1], true);
                }
            }
            changed = changed || fixed;
        }
    }
    return changed;
}

// Drop the inner corner of every 4-connected step: a pixel whose only 4-neighbours
// are two perpendicular ones with a background diagonal between them. The two
// neighbours stay 8-adjacent, so the line keeps its shape without the
// triangle that would otherwise read as a junction.
bool remove_staircase_corners(BinaryRaster& img) {
    bool changed = false;
    for (int r = 0; r < img.height(); ++r) {
        for (int c = 0; c < img.width(); ++c) {
            if (!img.at(r, c)) continue;
            const auto p = ring(img, r, c);
            const bool n = p[0], e = p[2], s = p[4], w = p[6];
            if ((n ? 1 : 0) + (e ? 1 : 0) + (s ? 1 : 0) + (w ? 1 : 0) != 2) continue;
            const bool corner = (n && e && !p[1]) || (e && s && !p[3]) || (s && w && !p[5]) || (w && n && !p[7]);
            if (!corner || !single_neighbour_group(img, r, c)) continue;
            img.set(r, c, false);
            changed = true;
        }
    }
    return changed;
}

}  // namespace

Skeleton skeletonize(const BinaryRaster& mask) {
    BinaryRaster img = mask;
    const BinaryRaster allowed = dilate3x3(mask);
    const long max_rounds = static_cast<long>(mask.height()) * mask.width() + 16;
    for (long round = 0; round < max_rounds; ++round) {
        bool changed = false;
        while (zhang_suen_pass(img)) changed = true;
        if (break_blocks(img, allowed)) changed = true;
        if (remove_staircase_corners(img)) changed = true;
        if (!changed) break;
    }
    return Skeleton(img);
}

}  // namespace trailroute
