// Copyright 2026 The clickbait-hybrid Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "clickbait/pca.hpp"

#include <bit>
#include <cstdio>
#include <fstream>
#include <vector>

#include "clickbait/error.hpp"

namespace clickbait {

PcaModel pca_fit(const Eigen::MatrixXd& X, Eigen::Index d_out) {
  const auto n = X.rows();
  const auto dim = X.cols();
  if (n < 2) throw PreconditionError("PCA needs at least 2 samples");
  if (d_out < 1 || d_out > std::min<Eigen::Index>(n - 1, dim)) {
    throw PreconditionError("PCA output dimension " + std::to_string(d_out) +
                            " exceeds min(n - 1, dim) = " +
                            std::to_string(std::min<Eigen::Index>(n - 1, dim)));
  }
  if (!X.allFinite()) throw PreconditionError("PCA input has non-finite entries");

  PcaModel model;
  model.mean = X.colwise().mean().transpose();
  const Eigen::MatrixXd centered = X.rowwise() - model.mean.transpose();

  Eigen::BDCSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  const double total = s.squaredNorm();

  model.components = svd.matrixV().leftCols(d_out).transpose();
  for (Eigen::Index r = 0; r < d_out; ++r) {
    Eigen::Index arg = 0;
    model.components.row(r).cwiseAbs().maxCoeff(&arg);
    if (model.components(r, arg) < 0.0) model.components.row(r) *= -1.0;
  }
  model.explained_variance = s.head(d_out).array().square() / static_cast<double>(n - 1);
  model.explained_variance_ratio =
      total > 0.0 ? Eigen::VectorXd(s.head(d_out).array().square() / total)
                  : Eigen::VectorXd::Zero(d_out);
  return model;
}

Eigen::MatrixXd pca_transform(const PcaModel& model, const Eigen::MatrixXd& X) {
  if (X.cols() != model.input_dim()) {
    throw PreconditionError("PCA transform expects " + std::to_string(model.input_dim()) +
                            " columns, got " + std::to_string(X.cols()));
  }
  return (X.rowwise() - model.mean.transpose()) * model.components.transpose();
}

Eigen::MatrixXd pca_reconstruct(const PcaModel& model, const Eigen::MatrixXd& Z) {
  if (Z.cols() != model.output_dim()) throw PreconditionError("PCA reconstruct: dimension mismatch");
  return (Z * model.components).rowwise() + model.mean.transpose();
}

namespace {

constexpr char kPcaMagic[4] = {'C', 'B', 'P', 'C'};
constexpr std::uint32_t kPcaVersion = 1;

void put_u32(std::ostream& out, std::uint32_t v) {
  for (int k = 0; k < 4; ++k) out.put(static_cast<char>((v >> (8 * k)) & 0xFF));
}

std::uint32_t get_u32(std::istream& in) {
  std::uint32_t v = 0;
  for (int k = 0; k < 4; ++k) {
    const int c = in.get();
    if (c == EOF) throw FormatError("PCA model truncated");
    v |= static_cast<std::uint32_t>(c & 0xFF) << (8 * k);
  }
  return v;
}

void put_floats(std::ostream& out, const double* data, Eigen::Index count) {
  for (Eigen::Index i = 0; i < count; ++i) put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(data[i])));
}

void get_floats(std::istream& in, double* data, Eigen::Index count) {
  for (Eigen::Index i = 0; i < count; ++i) data[i] = std::bit_cast<float>(get_u32(in));
}

}  // namespace

void save_pca(const std::filesystem::path& path, const PcaModel& model) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out.write(kPcaMagic, 4);
  put_u32(out, kPcaVersion);
  put_u32(out, static_cast<std::uint32_t>(model.input_dim()));
  put_u32(out, static_cast<std::uint32_t>(model.output_dim()));
  put_floats(out, model.mean.data(), model.mean.size());
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rows = model.components;
  put_floats(out, rows.data(), rows.size());
  put_floats(out, model.explained_variance_ratio.data(), model.output_dim());
  put_floats(out, model.explained_variance.data(), model.output_dim());
}

PcaModel load_pca(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  char magic[4];
  if (!in.read(magic, 4) || std::string_view(magic, 4) != std::string_view(kPcaMagic, 4)) {
    throw FormatError(path.string() + ": not a PCA model");
  }
  if (get_u32(in) != kPcaVersion) throw FormatError(path.string() + ": unsupported version");
  const Eigen::Index dim = get_u32(in);
  const Eigen::Index d_out = get_u32(in);
  PcaModel model;
  model.mean.resize(dim);
  get_floats(in, model.mean.data(), dim);
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rows(d_out, dim);
  get_floats(in, rows.data(), rows.size());
  model.components = rows;
  model.explained_variance_ratio.resize(d_out);
  get_floats(in, model.explained_variance_ratio.data(), d_out);
  model.explained_variance.resize(d_out);
  get_floats(in, model.explained_variance.data(), d_out);
  return model;
}

MemoryFootprint memory_footprint(std::uint64_t rows, std::uint64_t dim, std::uint64_t bytes_per_value) {
  MemoryFootprint f;
  f.bytes = rows * dim * bytes_per_value;
  f.decimal_mb = static_cast<double>(f.bytes) / 1e6;
  f.binary_mib = static_cast<double>(f.bytes) / 1048576.0;
  return f;
}

std::string MemoryFootprint::describe() const {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%llu bytes (%.1f MB, %.1f MiB)",
                static_cast<unsigned long long>(bytes), decimal_mb, binary_mib);
  return buf;
}

}  // namespace clickbait
