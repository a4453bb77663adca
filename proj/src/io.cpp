#include "hns/io.hpp"

#include <openssl/evp.h>

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace hns {

static_assert(std::endian::native == std::endian::little,
              "binary dumps assume a little-endian host");

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, std::vector<std::string> columns)
    : path_(path), ncol_(columns.size()) {
    f_ = std::fopen(path.string().c_str(), "wb");
    if (!f_) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    row(columns);
}

CsvWriter::~CsvWriter() {
    if (f_) std::fclose(f_);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (!f_) throw std::logic_error("CsvWriter: file already closed");
    if (cells.size() != ncol_) throw std::logic_error("CsvWriter: column count mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) std::fputc(',', f_);
        std::fputs(cells[i].c_str(), f_);
    }
    std::fputc('\n', f_);
}

void CsvWriter::close() {
    if (f_ && std::fclose(f_) != 0) {
        f_ = nullptr;
        throw std::runtime_error("error writing '" + path_.string() + "'");
    }
    f_ = nullptr;
}

void write_field_dump(const std::filesystem::path& path, const SpectralField& f, double t,
                      double tau) {
    const Grid& g = f.grid();
    const auto s = from_spectral(f);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    const std::int64_t nx = g.Nx, ny = g.Ny;
    out.write(reinterpret_cast<const char*>(&nx), 8);
    out.write(reinterpret_cast<const char*>(&ny), 8);
    out.write(reinterpret_cast<const char*>(&t), 8);
    out.write(reinterpret_cast<const char*>(&tau), 8);
    out.write(reinterpret_cast<const char*>(s.data()),
              static_cast<std::streamsize>(s.size() * sizeof(double)));
    if (!out) throw std::runtime_error("error writing '" + path.string() + "'");
}

FieldDump read_field_dump(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    std::int64_t nx = 0, ny = 0;
    FieldDump d;
    in.read(reinterpret_cast<char*>(&nx), 8);
    in.read(reinterpret_cast<char*>(&ny), 8);
    in.read(reinterpret_cast<char*>(&d.t), 8);
    in.read(reinterpret_cast<char*>(&d.tau), 8);
    if (!in || nx <= 0 || ny <= 0 || nx > (1 << 20) || ny > (1 << 20))
        throw std::runtime_error("'" + path.string() + "': bad dump header");
    d.Nx = static_cast<int>(nx);
    d.Ny = static_cast<int>(ny);
    d.samples.resize(static_cast<std::size_t>(nx * ny));
    in.read(reinterpret_cast<char*>(d.samples.data()),
            static_cast<std::streamsize>(d.samples.size() * sizeof(double)));
    if (!in) throw std::runtime_error("'" + path.string() + "': truncated dump");
    return d;
}

namespace {

struct Digest {
    EVP_MD_CTX* ctx;
    Digest() : ctx(EVP_MD_CTX_new()) {
        if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1)
            throw std::runtime_error("sha256: init failed");
    }
    ~Digest() { EVP_MD_CTX_free(ctx); }
    void update(const void* p, std::size_t n) {
        if (EVP_DigestUpdate(ctx, p, n) != 1) throw std::runtime_error("sha256: update failed");
    }
    std::string hex() {
        unsigned char md[EVP_MAX_MD_SIZE];
        unsigned int len = 0;
        if (EVP_DigestFinal_ex(ctx, md, &len) != 1) throw std::runtime_error("sha256: final failed");
        static const char* digits = "0123456789abcdef";
        std::string s;
        for (unsigned i = 0; i < len; ++i) {
            s += digits[md[i] >> 4];
            s += digits[md[i] & 15];
        }
        return s;
    }
};

}  // namespace

std::string sha256_bytes(const std::string& bytes) {
    Digest d;
    d.update(bytes.data(), bytes.size());
    return d.hex();
}

std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    Digest d;
    char buf[1 << 16];
    while (in) {
        in.read(buf, sizeof buf);
        d.update(buf, static_cast<std::size_t>(in.gcount()));
    }
    return d.hex();
}

}  // namespace hns
