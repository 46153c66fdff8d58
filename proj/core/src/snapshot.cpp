#include "inls/snapshot.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <memory>
#include <stdexcept>
#include <vector>

#include "inls/cartesian.hpp"

namespace inls {

namespace {

constexpr std::uint32_t kVersion = 1;

void put_bytes(std::FILE* f, const void* p, std::size_t n) {
    if (std::fwrite(p, 1, n, f) != n) throw std::runtime_error("snapshot: short write");
}
void get_bytes(std::FILE* f, void* p, std::size_t n) {
    if (std::fread(p, 1, n, f) != n) throw std::runtime_error("snapshot: short read");
}
template <typename T>
void put(std::FILE* f, T v) {
    put_bytes(f, &v, sizeof v);
}
template <typename T>
T get(std::FILE* f) {
    T v;
    get_bytes(f, &v, sizeof v);
    return v;
}

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};

}  // namespace

void write_snapshot(const std::string& path, const Field& field) {
    std::string tmp = path + ".tmp";
    {
        std::unique_ptr<std::FILE, FileCloser> f(std::fopen(tmp.c_str(), "wb"));
        if (!f) throw std::runtime_error("snapshot: cannot open " + tmp);
        put_bytes(f.get(), "INLS", 4);
        put<std::uint32_t>(f.get(), kVersion);
        put<std::uint8_t>(f.get(), field.is_radial() ? 0 : 1);
        if (field.is_radial()) {
            put<std::uint32_t>(f.get(), static_cast<std::uint32_t>(field.radial->dim));
            put<std::uint32_t>(f.get(), static_cast<std::uint32_t>(field.components()));
            put<std::uint32_t>(f.get(), static_cast<std::uint32_t>(field.radial->points));
            put<double>(f.get(), field.radial->r_max);
        } else {
            put<std::uint32_t>(f.get(), static_cast<std::uint32_t>(field.cartesian->dim));
            put<std::uint32_t>(f.get(), static_cast<std::uint32_t>(field.components()));
            for (int d = 0; d < field.cartesian->dim; ++d)
                put<std::uint32_t>(f.get(), static_cast<std::uint32_t>(field.cartesian->points_per_axis));
            put<double>(f.get(), field.cartesian->extent);
        }
        for (const auto& c : field.comp)
            for (auto z : c) {
                put<double>(f.get(), z.real());
                put<double>(f.get(), z.imag());
            }
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("snapshot: rename failed for " + path);
}

Field read_snapshot(const std::string& path) {
    std::unique_ptr<std::FILE, FileCloser> f(std::fopen(path.c_str(), "rb"));
    if (!f) throw std::runtime_error("snapshot: cannot open " + path);
    char magic[4];
    get_bytes(f.get(), magic, 4);
    if (std::memcmp(magic, "INLS", 4) != 0) throw std::runtime_error("snapshot: bad magic");
    auto version = get<std::uint32_t>(f.get());
    if (version != kVersion) throw std::runtime_error("snapshot: unsupported version");
    auto kind = get<std::uint8_t>(f.get());
    auto n = get<std::uint32_t>(f.get());
    auto l = get<std::uint32_t>(f.get());
    Field field;
    std::size_t samples = 0;
    if (kind == 0) {
        auto N = get<std::uint32_t>(f.get());
        double rmax = get<double>(f.get());
        field.radial = std::make_shared<RadialGrid>(static_cast<int>(n), static_cast<int>(N), rmax);
        samples = N;
    } else if (kind == 1) {
        std::uint32_t M = 0;
        for (std::uint32_t d = 0; d < n; ++d) {
            auto m = get<std::uint32_t>(f.get());
            if (d == 0)
                M = m;
            else if (m != M)
                throw std::runtime_error("snapshot: anisotropic boxes not supported");
        }
        double L = get<double>(f.get());
        field.cartesian = std::make_shared<CartesianGrid>(static_cast<int>(n), static_cast<int>(M), L);
        samples = field.cartesian->total();
    } else {
        throw std::runtime_error("snapshot: unknown grid kind");
    }
    field.comp.assign(l, std::vector<Complex>(samples));
    for (auto& c : field.comp)
        for (auto& z : c) {
            double re = get<double>(f.get());
            double im = get<double>(f.get());
            z = Complex{re, im};
        }
    return field;
}

}  // namespace inls
