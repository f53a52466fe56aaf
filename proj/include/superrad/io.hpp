#pragma once
//
// CSV and matrix-file output. CSV dialect: comma-separated, '.' decimal,
// '#'-prefixed header lines echoing the resolved configuration.
//

#include <complex>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "superrad/hamiltonian.hpp"

namespace superrad {

inline std::string fmt_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// CSV file with '#' comment header lines, then a column-name row.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header_comments,
              const std::vector<std::string>& columns)
        : out_(path)
    {
        if (!out_)
            throw std::runtime_error("CsvWriter: cannot open " + path);
        for (const auto& line : header_comments)
            out_ << "# " << line << "\n";
        out_ << "# columns: ";
        write_row_raw(columns);
    }

    void write_row(const std::vector<double>& values)
    {
        std::vector<std::string> cells;
        cells.reserve(values.size());
        for (double v : values)
            cells.push_back(fmt_double(v));
        write_row_raw(cells);
    }

    void write_row_raw(const std::vector<std::string>& cells)
    {
        for (std::size_t i = 0; i < cells.size(); ++i)
            out_ << cells[i] << (i + 1 < cells.size() ? "," : "\n");
    }

private:
    std::ofstream out_;
};

/// Text matrix format: '#' header with N, model and physics, then row-major
/// rows of whitespace-separated (re, im) pairs.
inline void write_matrix(std::ostream& out, const EffectiveHamiltonian& H)
{
    const Eigen::Index n = H.matrix.rows();
    out << "# superrad matrix v1\n";
    out << "# N " << n << "\n";
    out << "# model " << model_name(H.model) << "\n";
    out << "# gamma " << fmt_double(H.params.gamma) << "\n";
    out << "# lambda_a " << fmt_double(H.params.lambda_a) << "\n";
    out << "# layout row-major complex pairs (re im)\n";
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const Complex v = H.matrix(i, j);
            out << fmt_double(v.real()) << " " << fmt_double(v.imag())
                << (j + 1 < n ? " " : "\n");
        }
    }
}

inline EffectiveHamiltonian read_matrix(std::istream& in)
{
    EffectiveHamiltonian H;
    std::string line;
    Eigen::Index n = -1;
    while (in.peek() == '#') {
        std::getline(in, line);
        std::istringstream ls(line);
        std::string hash, key;
        ls >> hash >> key;
        if (key == "N")
            ls >> n;
        else if (key == "model") {
            std::string m;
            ls >> m;
            H.model = (m == "km") ? Model::KM : Model::MemoryKernel;
        } else if (key == "gamma")
            ls >> H.params.gamma;
        else if (key == "lambda_a")
            ls >> H.params.lambda_a;
    }
    if (n < 0)
        throw std::runtime_error("read_matrix: missing N header");
    H.matrix.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            double re, im;
            if (!(in >> re >> im))
                throw std::runtime_error("read_matrix: truncated matrix body");
            H.matrix(i, j) = Complex{re, im};
        }
    return H;
}

} // namespace superrad
