#pragma once
// Output formats: CSV with 17 significant digits, raw binary field dumps,
// SHA-256 content hashes for the manifest.
//
// Binary dump layout, little-endian:
//   int64 Nx, int64 Ny, float64 t, float64 tau,
//   then Nx*Ny float64 physical samples, row-major [iy][ix].

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "hns/grid.hpp"

namespace hns {

std::string fmt17(double v);

class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, std::vector<std::string> columns);
    ~CsvWriter();
    CsvWriter(const CsvWriter&) = delete;
    CsvWriter& operator=(const CsvWriter&) = delete;

    // Cells already formatted; the count must match the header.
    void row(const std::vector<std::string>& cells);
    void close();
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
    std::size_t ncol_;
    std::FILE* f_ = nullptr;
};

struct FieldDump {
    int Nx = 0, Ny = 0;
    double t = 0.0, tau = 0.0;
    std::vector<double> samples;
};

void write_field_dump(const std::filesystem::path& path, const SpectralField& f, double t,
                      double tau);
FieldDump read_field_dump(const std::filesystem::path& path);

std::string sha256_file(const std::filesystem::path& path);
std::string sha256_bytes(const std::string& bytes);

}  // namespace hns
