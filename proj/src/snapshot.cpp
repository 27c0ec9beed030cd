#include "csd/snapshot.hpp"

#include <cstring>
#include <fstream>

namespace csd::io {

namespace {

void put_u32(std::ostream& out, std::uint32_t v) {
    unsigned char b[4] = {(unsigned char)(v & 0xff), (unsigned char)((v >> 8) & 0xff),
                          (unsigned char)((v >> 16) & 0xff), (unsigned char)((v >> 24) & 0xff)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

void put_f64(std::ostream& out, double d) {
    std::uint64_t v;
    std::memcpy(&v, &d, 8);
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = (unsigned char)((v >> (8 * i)) & 0xff);
    out.write(reinterpret_cast<const char*>(b), 8);
}

std::uint32_t get_u32(std::istream& in) {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    return std::uint32_t(b[0]) | (std::uint32_t(b[1]) << 8) | (std::uint32_t(b[2]) << 16) |
           (std::uint32_t(b[3]) << 24);
}

double get_f64(std::istream& in) {
    unsigned char b[8];
    in.read(reinterpret_cast<char*>(b), 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t(b[i]) << (8 * i);
    double d;
    std::memcpy(&d, &v, 8);
    return d;
}

void write_header(std::ostream& out, const Grid& g, double t, int ncomp) {
    out.write("CSDF", 4);
    put_u32(out, snapshot_version);
    put_u32(out, std::uint32_t(g.n));
    put_f64(out, g.length);
    put_f64(out, t);
    put_u32(out, std::uint32_t(ncomp));
}

void write_component(std::ostream& out, const ScalarField& f) {
    for (const cplx& v : f.values()) {
        put_f64(out, v.real());
        put_f64(out, v.imag());
    }
}

void read_component(std::istream& in, ScalarField& f) {
    for (cplx& v : f.values()) {
        const double re = get_f64(in);
        const double im = get_f64(in);
        v = cplx{re, im};
    }
}

SnapshotMeta read_header(std::istream& in, const std::string& path) {
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "CSDF", 4) != 0)
        throw std::runtime_error("snapshot " + path + ": bad magic");
    SnapshotMeta m;
    m.version = get_u32(in);
    if (m.version != snapshot_version)
        throw std::runtime_error("snapshot " + path + ": unsupported format version");
    m.n = int(get_u32(in));
    m.length = get_f64(in);
    m.time = get_f64(in);
    m.ncomp = int(get_u32(in));
    if (!in) throw std::runtime_error("snapshot " + path + ": truncated header");
    return m;
}

}  // namespace

void write_snapshot(const std::string& path, const ScalarField& f, double t) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    write_header(out, f.grid(), t, 1);
    write_component(out, f);
}

void write_snapshot(const std::string& path, const SpinorField& f, double t) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    write_header(out, f.grid(), t, 2);
    write_component(out, f.comp(0));
    write_component(out, f.comp(1));
}

SnapshotMeta read_snapshot_meta(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_header(in, path);
}

ScalarField read_snapshot_scalar(const std::string& path, double* t) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    const SnapshotMeta m = read_header(in, path);
    if (m.ncomp != 1) throw std::runtime_error("snapshot " + path + ": expected 1 component");
    ScalarField f(Grid(m.n, m.length));
    read_component(in, f);
    if (!in) throw std::runtime_error("snapshot " + path + ": truncated data");
    if (t) *t = m.time;
    return f;
}

SpinorField read_snapshot_spinor(const std::string& path, double* t) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    const SnapshotMeta m = read_header(in, path);
    if (m.ncomp != 2) throw std::runtime_error("snapshot " + path + ": expected 2 components");
    SpinorField f(Grid(m.n, m.length));
    read_component(in, f.comp(0));
    read_component(in, f.comp(1));
    if (!in) throw std::runtime_error("snapshot " + path + ": truncated data");
    if (t) *t = m.time;
    return f;
}

}  // namespace csd::io
