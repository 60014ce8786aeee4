#include "lwhac/dendrogram.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "lwhac/errors.hpp"
#include "lwhac/io.hpp"

namespace lwhac {

namespace {

std::uint64_t fnv1a(std::uint64_t h, std::uint64_t word) noexcept {
  for (int b = 0; b < 8; ++b) {
    h ^= (word >> (8 * b)) & 0xffu;
    h *= 0x100000001b3ull;
  }
  return h;
}

// Union-find over leaves, used for cutting.
class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    auto field = line.substr(start, comma == std::string_view::npos ? line.npos : comma - start);
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
    while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r'))
      field.remove_suffix(1);
    out.push_back(field);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

template <typename T>
bool parse_number(std::string_view s, T& value) {
  std::istringstream in{std::string(s)};
  in >> value;
  return in && in.peek() == std::char_traits<char>::eof();
}

}  // namespace

bool bitwise_equal(const Dendrogram& a, const Dendrogram& b) noexcept {
  if (a.n != b.n || a.merges.size() != b.merges.size()) return false;
  for (std::size_t k = 0; k < a.merges.size(); ++k) {
    const Merge& x = a.merges[k];
    const Merge& y = b.merges[k];
    if (x.left != y.left || x.right != y.right || x.size != y.size ||
        std::bit_cast<std::uint64_t>(x.height) != std::bit_cast<std::uint64_t>(y.height)) {
      return false;
    }
  }
  return true;
}

std::uint64_t dendrogram_hash(const Dendrogram& d) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ull;
  h = fnv1a(h, d.n);
  for (const Merge& m : d.merges) {
    h = fnv1a(h, m.left);
    h = fnv1a(h, m.right);
    h = fnv1a(h, std::bit_cast<std::uint64_t>(m.height));
    h = fnv1a(h, m.size);
  }
  return h;
}

void validate(const Dendrogram& d) {
  const std::size_t expected = d.n < 2 ? 0 : d.n - 1;
  if (d.merges.size() != expected) {
    throw InputError("dendrogram over " + std::to_string(d.n) + " items needs " +
                     std::to_string(expected) + " merges, got " + std::to_string(d.merges.size()));
  }
  std::vector<std::size_t> size(d.n + d.merges.size(), 1);
  std::vector<std::uint8_t> used(size.size(), 0);
  for (std::size_t k = 0; k < d.merges.size(); ++k) {
    const Merge& m = d.merges[k];
    const std::size_t id = d.n + k;
    const auto where = "merge " + std::to_string(k) + ": ";
    if (m.left >= m.right || m.right >= id) {
      throw InputError(where + "ids must satisfy left < right < " + std::to_string(id));
    }
    if (used[m.left] || used[m.right]) throw InputError(where + "cluster merged twice");
    if (m.size != size[m.left] + size[m.right]) {
      throw InputError(where + "size " + std::to_string(m.size) + " != " +
                       std::to_string(size[m.left] + size[m.right]));
    }
    used[m.left] = used[m.right] = 1;
    size[id] = m.size;
  }
}

std::vector<std::vector<std::size_t>> flat_clusters(const Dendrogram& d, std::size_t k) {
  if (k < 1 || k > d.n) {
    throw std::domain_error("flat_clusters: k = " + std::to_string(k) + " outside [1, " +
                            std::to_string(d.n) + "]");
  }
  // Representative leaf of each cluster id.
  std::vector<std::size_t> rep(d.n + d.merges.size());
  std::iota(rep.begin(), rep.begin() + static_cast<std::ptrdiff_t>(d.n), std::size_t{0});
  DisjointSets sets(d.n);
  for (std::size_t m = 0; m < d.n - k; ++m) {
    const Merge& merge = d.merges[m];
    sets.unite(rep[merge.left], rep[merge.right]);
    rep[d.n + m] = rep[merge.left];
  }

  std::vector<std::vector<std::size_t>> groups;
  std::vector<std::size_t> group_of_root(d.n, d.n);
  for (std::size_t item = 0; item < d.n; ++item) {
    const std::size_t root = sets.find(item);
    if (group_of_root[root] == d.n) {
      group_of_root[root] = groups.size();
      groups.emplace_back();
    }
    groups[group_of_root[root]].push_back(item);
  }
  return groups;
}

std::vector<std::size_t> cluster_labels(const Dendrogram& d, std::size_t k) {
  const auto groups = flat_clusters(d, k);
  std::vector<std::size_t> labels(d.n);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (std::size_t item : groups[g]) labels[item] = g;
  }
  return labels;
}

std::string to_merge_csv(const Dendrogram& d) {
  std::string out;
  for (const Merge& m : d.merges) {
    out += std::to_string(m.left);
    out += ',';
    out += std::to_string(m.right);
    out += ',';
    out += format_double(m.height);
    out += ',';
    out += std::to_string(m.size);
    out += '\n';
  }
  return out;
}

Dendrogram parse_merge_csv(std::string_view text) {
  Dendrogram d;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;

    const auto fields = split_fields(line);
    Merge m;
    const bool ok = fields.size() == 4 && parse_number(fields[0], m.left) &&
                    parse_number(fields[1], m.right) && parse_number(fields[2], m.height) &&
                    parse_number(fields[3], m.size);
    if (!ok) {
      if (line_no == 1 && d.merges.empty()) continue;  // header
      throw InputError("merge list line " + std::to_string(line_no) +
                       ": expected left,right,height,size");
    }
    d.merges.push_back(m);
  }
  d.n = d.merges.size() + 1;
  validate(d);
  return d;
}

std::string to_newick(const Dendrogram& d) {
  if (d.n == 0) return ";";
  const std::size_t root = d.n + d.merges.size() - 1;
  auto height_of = [&](std::size_t id) { return id < d.n ? 0.0 : d.merges[id - d.n].height; };

  // Iterative DFS; a chain-shaped tree can be as deep as n.
  std::string out;
  struct Frame {
    std::size_t id;
    int stage;
  };
  std::vector<Frame> stack{{root, 0}};
  std::vector<std::size_t> parent(d.n + d.merges.size(), root);
  for (std::size_t k = 0; k < d.merges.size(); ++k) {
    parent[d.merges[k].left] = parent[d.merges[k].right] = d.n + k;
  }
  auto close_node = [&](std::size_t id) {
    if (id != root) {
      out += ':';
      out += format_double(height_of(parent[id]) - height_of(id));
    }
  };
  while (!stack.empty()) {
    Frame& f = stack.back();
    if (f.id < d.n) {
      out += std::to_string(f.id);
      close_node(f.id);
      stack.pop_back();
      continue;
    }
    const Merge& m = d.merges[f.id - d.n];
    switch (f.stage++) {
      case 0:
        out += '(';
        stack.push_back({m.left, 0});
        break;
      case 1:
        out += ',';
        stack.push_back({m.right, 0});
        break;
      default: {
        out += ')';
        const std::size_t id = f.id;
        stack.pop_back();
        close_node(id);
      }
    }
  }
  out += ';';
  return out;
}

std::string to_json(const Dendrogram& d, int indent) {
  using nlohmann::json;
  json doc;
  doc["n"] = d.n;
  if (d.n == 0) {
    doc["root"] = nullptr;
    return doc.dump(indent);
  }
  std::vector<json> nodes(d.n + d.merges.size());
  for (std::size_t i = 0; i < d.n; ++i) {
    nodes[i] = {{"id", i}, {"height", 0.0}, {"size", 1}};
  }
  for (std::size_t k = 0; k < d.merges.size(); ++k) {
    const Merge& m = d.merges[k];
    json node = {{"id", d.n + k}, {"height", m.height}, {"size", m.size}};
    node["children"] = json::array({std::move(nodes[m.left]), std::move(nodes[m.right])});
    nodes[d.n + k] = std::move(node);
  }
  doc["root"] = std::move(nodes.back());
  return doc.dump(indent);
}

}  // namespace lwhac
