#include "sck/pairs.hpp"

#include "sck/parallel.hpp"
#include "sck/spatial_index.hpp"
#include "sck/voxel.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <stdexcept>

namespace sck {

void CorrespondenceSet::validate() const {
    std::set<std::pair<int, int>> seen;
    for (const auto& [i, j] : pairs) {
        if (i < 0 || j < 0) throw std::invalid_argument("CorrespondenceSet: negative index");
        if (!seen.insert({i, j}).second)
            throw std::invalid_argument("CorrespondenceSet: duplicate pair");
    }
}

std::vector<int> subsample_frames(const std::vector<int>& frame_ids, int stride) {
    if (stride < 1) throw std::invalid_argument("subsample_frames: stride must be >= 1");
    std::vector<int> out;
    for (std::size_t i = 0; i < frame_ids.size(); i += static_cast<std::size_t>(stride))
        out.push_back(frame_ids[i]);
    return out;
}

OverlapResult compute_overlap(const PointCloud& a, const Pose& pose_a, const PointCloud& b,
                              const Pose& pose_b, double radius) {
    if (radius <= 0.0) throw std::invalid_argument("compute_overlap: radius must be > 0");
    if (a.empty() || b.empty()) throw std::invalid_argument("compute_overlap: empty cloud");

    const PointCloud wa = transform(a, pose_a);
    const PointCloud wb = transform(b, pose_b);
    SpatialIndex index(wb.positions);

    OverlapResult result;
    result.matches.match_radius = radius;
    std::vector<int> match_of(wa.size(), -1);
    parallel_for(wa.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const auto [j, dist] = index.nearest(wa.positions[i]);
            if (j >= 0 && dist <= radius) match_of[i] = j;
        }
    });
    for (std::size_t i = 0; i < wa.size(); ++i)
        if (match_of[i] >= 0) result.matches.pairs.emplace_back(static_cast<int>(i), match_of[i]);
    result.ratio = static_cast<double>(result.matches.pairs.size()) / static_cast<double>(wa.size());
    return result;
}

std::vector<MinedPair> mine_pairs(const std::vector<std::pair<PointCloud, Pose>>& frames,
                                  const MiningConfig& cfg) {
    if (cfg.radius <= 0.0) throw std::invalid_argument("mine_pairs: radius must be > 0");
    if (cfg.min_overlap < 0.0 || cfg.min_overlap > 1.0)
        throw std::invalid_argument("mine_pairs: min_overlap must be in [0,1]");
    std::vector<MinedPair> kept;
    if (frames.size() < 2) return kept;

    std::vector<PointCloud> down(frames.size());
    parallel_for(frames.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t f = begin; f < end; ++f)
            down[f] = cfg.voxel_size > 0.0 ? voxel_downsample(frames[f].first, cfg.voxel_size)
                                           : frames[f].first;
    });

    std::vector<std::pair<int, int>> all_pairs;
    for (std::size_t i = 0; i < frames.size(); ++i)
        for (std::size_t j = i + 1; j < frames.size(); ++j)
            all_pairs.emplace_back(static_cast<int>(i), static_cast<int>(j));

    std::vector<MinedPair> slots(all_pairs.size());
    std::vector<char> accepted(all_pairs.size(), 0);
    parallel_for(all_pairs.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t p = begin; p < end; ++p) {
            const auto [ia, ib] = all_pairs[p];
            if (down[ia].empty() || down[ib].empty()) continue;
            OverlapResult ab =
                compute_overlap(down[ia], frames[ia].second, down[ib], frames[ib].second, cfg.radius);
            OverlapResult ba =
                compute_overlap(down[ib], frames[ib].second, down[ia], frames[ia].second, cfg.radius);
            const double ratio = std::max(ab.ratio, ba.ratio);
            if (ratio >= cfg.min_overlap) {
                slots[p].frames = FramePair{ia, ib, ratio};
                slots[p].matches = std::move(ab.matches);
                accepted[p] = 1;
            }
        }
    });

    for (std::size_t p = 0; p < all_pairs.size(); ++p)
        if (accepted[p]) kept.push_back(std::move(slots[p]));
    // all_pairs is generated in (a, b) order already; keep it explicit
    std::sort(kept.begin(), kept.end(), [](const MinedPair& x, const MinedPair& y) {
        return std::pair(x.frames.frame_a, x.frames.frame_b) <
               std::pair(y.frames.frame_a, y.frames.frame_b);
    });
    return kept;
}

CorrespondenceSet sample_matches(const CorrespondenceSet& set, int n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sample_matches: n must be >= 1");
    CorrespondenceSet out;
    out.match_radius = set.match_radius;
    if (set.pairs.empty()) return out;

    const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(n), set.pairs.size());
    std::vector<std::size_t> indices(set.pairs.size());
    for (std::size_t i = 0; i < indices.size(); ++i) indices[i] = i;

    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < take; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, indices.size() - 1);
        std::swap(indices[i], indices[pick(rng)]);
    }
    out.pairs.reserve(take);
    for (std::size_t i = 0; i < take; ++i) out.pairs.push_back(set.pairs[indices[i]]);
    std::sort(out.pairs.begin(), out.pairs.end());
    return out;
}

}  // namespace sck
