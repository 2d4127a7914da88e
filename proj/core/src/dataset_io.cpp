// Copyright 2026 The CheckSel Authors.
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

#include "checksel/dataset_io.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

static_assert(std::endian::native == std::endian::little,
              "raw dataset format assumes a little-endian host");

namespace checksel {

namespace {

constexpr char kDatasetMagic[4] = {'C', 'K', 'D', 'S'};
constexpr char kContribMagic[4] = {'C', 'K', 'C', 'B'};

std::ifstream open_in(const std::string& path, bool binary) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  return in;
}

std::ofstream open_out(const std::string& path, bool binary) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

std::vector<std::string> split_line(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& s, const std::string& context) {
  double v = 0.0;
  const auto* begin = s.data();
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc{} || ptr != end) {
    throw std::runtime_error("bad numeric value '" + s + "' in " + context);
  }
  return v;
}

template <typename T>
void write_pod(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::ifstream& in, const std::string& context) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw std::runtime_error("truncated file while reading " + context);
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) throw std::runtime_error("double formatting failed");
  return std::string(buf, ptr);
}

Dataset read_dataset_csv(const std::string& path) {
  auto in = open_in(path, false);
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("empty CSV file: " + path);
  }
  const auto header = split_line(line, ',');
  int label_col = -1;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == "label") label_col = static_cast<int>(c);
  }
  if (label_col < 0) {
    throw std::runtime_error("CSV header has no 'label' column: " + path);
  }
  const auto d = static_cast<Eigen::Index>(header.size() - 1);

  std::vector<double> values;
  std::vector<int> labels;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_line(line, ',');
    if (cells.size() != header.size()) {
      throw std::runtime_error("CSV row width mismatch in " + path);
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (static_cast<int>(c) == label_col) {
        labels.push_back(static_cast<int>(parse_double(cells[c], path)));
      } else {
        values.push_back(parse_double(cells[c], path));
      }
    }
  }

  Dataset data;
  const auto n = static_cast<Eigen::Index>(labels.size());
  data.features.resize(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index c = 0; c < d; ++c) {
      data.features(i, c) = values[static_cast<std::size_t>(i * d + c)];
    }
  }
  data.labels = std::move(labels);
  data.num_classes = infer_num_classes(data.labels);
  data.validate();
  return data;
}

void write_dataset_csv(const std::string& path, const Dataset& data) {
  data.validate();
  auto out = open_out(path, false);
  for (Eigen::Index c = 0; c < data.dim(); ++c) {
    out << 'f' << c << ',';
  }
  out << "label\n";
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    for (Eigen::Index c = 0; c < data.dim(); ++c) {
      out << format_double(data.features(i, c)) << ',';
    }
    out << data.labels[static_cast<std::size_t>(i)] << '\n';
  }
}

Dataset read_dataset_raw(const std::string& path) {
  auto in = open_in(path, true);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kDatasetMagic, 4) != 0) {
    throw std::runtime_error("bad magic in raw dataset: " + path);
  }
  const auto n = read_pod<std::uint32_t>(in, path);
  const auto d = read_pod<std::uint32_t>(in, path);
  const auto label_offset = read_pod<std::uint32_t>(in, path);

  Dataset data;
  data.features.resize(static_cast<Eigen::Index>(n),
                       static_cast<Eigen::Index>(d));
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t c = 0; c < d; ++c) {
      data.features(static_cast<Eigen::Index>(i),
                    static_cast<Eigen::Index>(c)) =
          static_cast<double>(read_pod<float>(in, path));
    }
  }
  in.seekg(label_offset);
  if (!in) throw std::runtime_error("bad label offset in " + path);
  data.labels.resize(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    data.labels[i] = read_pod<std::int32_t>(in, path);
  }
  data.num_classes = infer_num_classes(data.labels);
  data.validate();
  return data;
}

void write_dataset_raw(const std::string& path, const Dataset& data) {
  data.validate();
  auto out = open_out(path, true);
  out.write(kDatasetMagic, 4);
  const auto n = static_cast<std::uint32_t>(data.size());
  const auto d = static_cast<std::uint32_t>(data.dim());
  const std::uint32_t label_offset = 16 + n * d * 4;
  write_pod(out, n);
  write_pod(out, d);
  write_pod(out, label_offset);
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t c = 0; c < d; ++c) {
      write_pod(out, static_cast<float>(data.features(
                         static_cast<Eigen::Index>(i),
                         static_cast<Eigen::Index>(c))));
    }
  }
  for (std::uint32_t i = 0; i < n; ++i) {
    write_pod(out, static_cast<std::int32_t>(data.labels[i]));
  }
}

Dataset read_dataset(const std::string& path) {
  {
    auto in = open_in(path, true);
    char magic[4] = {0, 0, 0, 0};
    in.read(magic, 4);
    if (in && std::memcmp(magic, kDatasetMagic, 4) == 0) {
      return read_dataset_raw(path);
    }
  }
  return read_dataset_csv(path);
}

void write_values_csv(const std::string& path,
                      const std::vector<ValueRecord>& records,
                      const std::vector<std::string>& comments) {
  auto out = open_out(path, false);
  for (const auto& c : comments) out << "# " << c << '\n';
  out << "index,value,source,epsilon,checkpoint_id\n";
  for (const auto& rec : records) {
    out << rec.index << ',' << format_double(rec.value) << ',';
    if (rec.source == ValueRecord::Source::kDirect) {
      out << "direct";
    } else {
      out << "propagated:" << rec.from_index;
    }
    out << ',' << format_double(rec.epsilon) << ',';
    if (rec.owners.empty()) {
      out << '-';
    } else {
      for (std::size_t o = 0; o < rec.owners.size(); ++o) {
        if (o > 0) out << '|';
        out << checkpoint_id_string(rec.owners[o]);
      }
    }
    out << '\n';
  }
}

std::vector<ValueRecord> read_values_csv(const std::string& path) {
  auto in = open_in(path, false);
  std::vector<ValueRecord> out;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;  // column header
      continue;
    }
    const auto cells = split_line(line, ',');
    if (cells.size() != 5) {
      throw std::runtime_error("bad values row in " + path);
    }
    ValueRecord rec;
    rec.index = static_cast<int>(parse_double(cells[0], path));
    rec.value = parse_double(cells[1], path);
    if (cells[2] == "direct") {
      rec.source = ValueRecord::Source::kDirect;
    } else if (cells[2].rfind("propagated:", 0) == 0) {
      rec.source = ValueRecord::Source::kPropagated;
      rec.from_index = std::stoi(cells[2].substr(11));
    } else {
      throw std::runtime_error("bad source '" + cells[2] + "' in " + path);
    }
    rec.epsilon = parse_double(cells[3], path);
    if (cells[4] != "-") {
      for (const auto& tok : split_line(cells[4], '|')) {
        rec.owners.push_back(checkpoint_id_from_string(tok));
      }
    }
    out.push_back(std::move(rec));
  }
  return out;
}

void write_contribs(const std::string& path,
                    const std::vector<ContribVector>& contribs) {
  auto out = open_out(path, true);
  out.write(kContribMagic, 4);
  write_pod(out, static_cast<std::uint32_t>(contribs.size()));
  const std::uint32_t width =
      contribs.empty() ? 0
                       : static_cast<std::uint32_t>(contribs[0].contrib.size());
  write_pod(out, width);
  for (const auto& cv : contribs) {
    if (cv.contrib.size() != static_cast<Eigen::Index>(width)) {
      throw std::invalid_argument("contrib vectors have mixed widths");
    }
    write_pod(out, static_cast<std::uint32_t>(cv.index));
    for (Eigen::Index j = 0; j < cv.contrib.size(); ++j) {
      write_pod(out, cv.contrib[j]);
    }
  }
}

std::vector<ContribVector> read_contribs(const std::string& path) {
  auto in = open_in(path, true);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kContribMagic, 4) != 0) {
    throw std::runtime_error("bad magic in contrib file: " + path);
  }
  const auto count = read_pod<std::uint32_t>(in, path);
  const auto width = read_pod<std::uint32_t>(in, path);
  std::vector<ContribVector> out;
  out.reserve(count);
  for (std::uint32_t r = 0; r < count; ++r) {
    ContribVector cv;
    cv.index = static_cast<int>(read_pod<std::uint32_t>(in, path));
    cv.contrib.resize(static_cast<Eigen::Index>(width));
    for (std::uint32_t j = 0; j < width; ++j) {
      cv.contrib[static_cast<Eigen::Index>(j)] = read_pod<double>(in, path);
    }
    out.push_back(std::move(cv));
  }
  return out;
}

void write_subset(const std::string& path, const SubsetResult& result) {
  auto out = open_out(path, false);
  out << "# f=" << result.selected.size()
      << " objective=" << format_double(result.objective)
      << " windows=" << result.windows << '\n';
  for (int i : result.selected) out << i << '\n';
}

std::vector<int> read_subset(const std::string& path) {
  auto in = open_in(path, false);
  std::vector<int> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    out.push_back(std::stoi(line));
  }
  return out;
}

}  // namespace checksel
