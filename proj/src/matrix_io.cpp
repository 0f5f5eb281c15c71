#include "scc/matrix_io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "scc/errors.hpp"

namespace scc {

namespace {

constexpr char kMagic[] = "SCCM1";

void put_le_double(std::ostream& out, double v) {
    uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
    out.write(buf, 8);
}

double get_le_double(std::istream& in) {
    char buf[8];
    in.read(buf, 8);
    if (in.gcount() != 8) throw FormatError("SCCM1: truncated payload");
    uint64_t bits = 0;
    for (int i = 0; i < 8; ++i)
        bits |= static_cast<uint64_t>(static_cast<unsigned char>(buf[i])) << (8 * i);
    double v;
    std::memcpy(&v, &bits, sizeof v);
    return v;
}

}  // namespace

void write_matrix(std::ostream& out, const SymMatrix& m) {
    out << kMagic << '\n' << m.dim() << '\n';
    for (int i = 0; i < m.dim(); ++i)
        for (int j = 0; j <= i; ++j) put_le_double(out, m(i, j));
    if (!out) throw IoError("SCCM1: write failed");
}

void write_matrix(const std::string& path, const SymMatrix& m) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    write_matrix(out, m);
}

SymMatrix read_matrix(std::istream& in) {
    std::string magic;
    if (!std::getline(in, magic) || magic != kMagic) {
        throw FormatError("SCCM1: bad magic");
    }
    std::string dim_line;
    if (!std::getline(in, dim_line)) throw FormatError("SCCM1: missing dim line");
    long dim = 0;
    try {
        size_t pos = 0;
        dim = std::stol(dim_line, &pos);
        if (pos != dim_line.size()) throw std::invalid_argument("trailing bytes");
    } catch (const std::exception&) {
        throw FormatError("SCCM1: invalid dim line '" + dim_line + "'");
    }
    if (dim < 1 || dim > 1000000) throw FormatError("SCCM1: dim out of range");

    Matrix m(dim, dim);
    for (long i = 0; i < dim; ++i) {
        for (long j = 0; j <= i; ++j) {
            double v = get_le_double(in);
            m(i, j) = v;
            m(j, i) = v;
        }
    }
    return SymMatrix(m);
}

SymMatrix read_matrix(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path);
    return read_matrix(in);
}

}  // namespace scc
