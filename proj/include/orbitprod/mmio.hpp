#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "orbitprod/model.hpp"
#include "orbitprod/spectral.hpp"

namespace orbitprod {

/// Reads J from a Matrix Market "coordinate real symmetric" stream.
/// Entries may sit in either triangle; each unordered pair must appear once.
/// Diagonal entries give d_i; missing diagonal entries are an error.
GraphModel read_precision(std::istream& in);
GraphModel read_precision_file(const std::string& path);

/// Writes J as lower-triangle coordinate entries, 1-based, diagonal first
/// within each row.
void write_precision(std::ostream& out, const GraphModel& model);
void write_precision_file(const std::string& path, const GraphModel& model);

/// Plain-text vector, one real per line. Blank lines and lines starting
/// with '%' or '#' are skipped.
std::vector<double> read_vector(std::istream& in);
std::vector<double> read_vector_file(const std::string& path);
void write_vector(std::ostream& out, const std::vector<double>& values);
void write_vector_file(const std::string& path, const std::vector<double>& values);

/// Writes a sparse matrix in "coordinate real general" form. Each line of
/// `comment` is emitted as a '%' comment after the banner.
void write_general(std::ostream& out, const SparseMatrix& m,
                   const std::string& comment = {});

}  // namespace orbitprod
