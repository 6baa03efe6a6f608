#ifndef FKP_PNM_HPP
#define FKP_PNM_HPP

#include <filesystem>

#include "fkp/image.hpp"

namespace fkp {

// Binary portable graymap (P5), maxval 255 only. Other maxvals are rejected
// so pixel values always round-trip bit-exactly.
GrayImage read_gray(const std::filesystem::path& path);
void write_gray(const GrayImage& img, const std::filesystem::path& path);

// Binary portable bitmap (P4). A set bit is foreground (an edge pixel) and is
// stored as P4 "black"; rows are padded to byte boundaries, padding bits zero.
BinaryImage read_binary(const std::filesystem::path& path);
void write_binary(const BinaryImage& img, const std::filesystem::path& path);

}  // namespace fkp

#endif
