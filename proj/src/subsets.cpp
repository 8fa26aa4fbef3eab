#include "sck/subsets.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace sck {

namespace {

std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// first k slots of a seeded partial Fisher-Yates over [0, n)
std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k, std::uint64_t seed) {
    std::vector<std::size_t> pool(n);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < k; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, n - 1);
        std::swap(pool[i], pool[pick(rng)]);
    }
    pool.resize(k);
    std::sort(pool.begin(), pool.end());
    return pool;
}

}  // namespace

std::vector<std::string> subset_scenes(const std::vector<std::string>& scene_ids,
                                       double percentage, std::uint64_t seed) {
    if (scene_ids.empty()) throw std::invalid_argument("subset_scenes: no scenes");
    if (!(percentage > 0.0) || percentage > 100.0)
        throw std::invalid_argument("subset_scenes: percentage must be in (0, 100]");
    const auto count = static_cast<std::size_t>(
        std::llround(percentage / 100.0 * static_cast<double>(scene_ids.size())));
    const auto picked = sample_indices(scene_ids.size(), std::min(count, scene_ids.size()), seed);
    std::vector<std::string> out;
    out.reserve(picked.size());
    for (std::size_t i : picked) out.push_back(scene_ids[i]);
    return out;
}

std::vector<std::vector<BoxAnnotation>> subset_boxes(
    const std::vector<std::vector<BoxAnnotation>>& scenes, int k, std::uint64_t seed) {
    if (k < 1) throw std::invalid_argument("subset_boxes: k must be >= 1");
    std::vector<std::vector<BoxAnnotation>> out;
    out.reserve(scenes.size());
    for (std::size_t s = 0; s < scenes.size(); ++s) {
        const auto& boxes = scenes[s];
        const std::size_t keep = std::min<std::size_t>(static_cast<std::size_t>(k), boxes.size());
        const auto picked = sample_indices(boxes.size(), keep, mix_seed(seed + s));
        std::vector<BoxAnnotation> subset;
        subset.reserve(keep);
        for (std::size_t i : picked) subset.push_back(boxes[i]);
        out.push_back(std::move(subset));
    }
    return out;
}

}  // namespace sck
