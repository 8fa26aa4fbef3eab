#pragma once

#include "sck/cloud.hpp"
#include "sck/features.hpp"
#include "sck/pairs.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace sck {

// PLY, ascii or binary_little_endian. Recognized vertex properties:
// x/y/z (float or double), red/green/blue (uchar), label and instance_id
// (int); unknown properties are skipped. Elements after the vertex data
// are ignored.
PointCloud read_ply(const std::string& path);
void write_ply(const std::string& path, const PointCloud& cloud, bool binary = true);

// 16 whitespace-separated numbers, row-major 4x4, last row 0 0 0 1.
Pose read_pose(const std::string& path);
void write_pose(const std::string& path, const Pose& pose);

// Feature dump: magic "FTRS", u32 rows, u32 dim, rows*dim little-endian f32.
FeatureMatrix read_features(const std::string& path);
void write_features(const std::string& path, const FeatureMatrix& features);

// Offset field: magic "OFFS", u32 count, count*3 little-endian f32.
std::vector<Eigen::Vector3d> read_offsets(const std::string& path);
void write_offsets(const std::string& path, const std::vector<Eigen::Vector3d>& offsets);

// Sparse label mask: magic "MASK", u32 count, count u8 labels (255 = ignore).
std::vector<std::uint8_t> read_mask(const std::string& path);
void write_mask(const std::string& path, const std::vector<std::uint8_t>& mask);

// Correspondences, text: "# match_radius=<r> overlap=<ratio>" then "i j"
// lines. The binary variant is magic "CORR", u32 count, u32 index pairs.
CorrespondenceSet read_correspondences_text(const std::string& path, double* overlap = nullptr);
void write_correspondences_text(const std::string& path, const CorrespondenceSet& set,
                                double overlap);
CorrespondenceSet read_correspondences_binary(const std::string& path);
void write_correspondences_binary(const std::string& path, const CorrespondenceSet& set);

}  // namespace sck
