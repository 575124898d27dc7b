#pragma once

#include <string>
#include <variant>

#include "cryodiff/grids.hpp"

namespace cryodiff {

// MRC2014 reader/writer.
//
// Layout handled here (word = 4 bytes, little-endian):
//   words 1-3    NX NY NZ        int32
//   word  4      MODE            0 int8, 1 int16, 2 float32, 6 uint16
//   words 8-10   MX MY MZ        grid size; voxel size = CELLA / M
//   words 11-13  CELLA           cell dimensions in Angstrom, float32
//   words 17-19  MAPC MAPR MAPS  axis order, normalized to 1/2/3 on read
//   words 20-22  DMIN DMAX DMEAN
//   word  23     ISPG            0 = image stack, 1/401 = volume
//   word  24     NSYMBT          extended header bytes (skipped on read)
//   word  53     "MAP "
//   word  54     machine stamp   0x44 0x44 0x00 0x00 for little-endian
// Data section: row-major, X fastest. Only MODE 2 is written.

using MrcData = std::variant<DensityMap, ImageStack>;

MrcData read_mrc(const std::string& path);

// Convenience wrappers; throw FormatError if the file holds the other kind.
DensityMap read_map(const std::string& path);
ImageStack read_stack(const std::string& path);

void write_mrc(const DensityMap& map, const std::string& path);
void write_mrc(const ImageStack& stack, const std::string& path);

}  // namespace cryodiff
