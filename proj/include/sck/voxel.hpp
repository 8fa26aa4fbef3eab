#pragma once

#include "sck/cloud.hpp"

namespace sck {

// Collapses each occupied voxel to the centroid of its members. Voxel
// membership is floor(p / voxel_size) per axis. Labels are decided by
// majority vote within the voxel, ties going to the smallest label id;
// colors are averaged. Output is ordered by voxel key, so the result is a
// pure function of the input.
PointCloud voxel_downsample(const PointCloud& cloud, double voxel_size);

}  // namespace sck
