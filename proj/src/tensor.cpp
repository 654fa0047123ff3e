#include "calcxx/tensor.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <map>
#include <set>

namespace calc {

namespace {

std::size_t product(const std::vector<std::size_t>& extents) {
  std::size_t n = 1;
  for (std::size_t e : extents) n *= e;
  return n;
}

}  // namespace

Tensor::Tensor(std::vector<std::size_t> extents, std::vector<Scalar> data)
    : Tensor(std::move(extents), {}, std::move(data)) {}

Tensor::Tensor(std::vector<std::size_t> extents,
               std::vector<std::string> names, std::vector<Scalar> data)
    : extents_(std::move(extents)),
      names_(std::move(names)),
      data_(std::move(data)) {
  for (std::size_t e : extents_) {
    if (e == 0) throw ShapeError("zero extent");
  }
  if (data_.size() != product(extents_))
    throw ShapeError("data length does not match the product of extents");
  if (names_.empty()) {
    names_.resize(extents_.size());
  } else if (names_.size() != extents_.size()) {
    throw ShapeError("one index name per dimension required");
  }
}

std::size_t Tensor::linear_index(const std::vector<std::size_t>& idx) const {
  if (idx.size() != extents_.size())
    throw ShapeError("index rank does not match tensor rank");
  std::size_t lin = 0;
  std::size_t stride = 1;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (idx[k] >= extents_[k]) throw ShapeError("index out of range");
    lin += idx[k] * stride;
    stride *= extents_[k];
  }
  return lin;
}

std::vector<std::size_t> Tensor::multi_index(std::size_t linear) const {
  std::vector<std::size_t> idx(extents_.size());
  for (std::size_t k = 0; k < extents_.size(); ++k) {
    idx[k] = linear % extents_[k];
    linear /= extents_[k];
  }
  return idx;
}

bool Tensor::all_numeric() const {
  for (const Scalar& s : data_) {
    if (s.is_symbolic()) return false;
  }
  return true;
}

bool Tensor::has_names() const {
  for (const std::string& n : names_) {
    if (!n.empty()) return true;
  }
  return false;
}

Tensor Tensor::renamed(std::vector<std::string> names) const {
  return Tensor(extents_, std::move(names), data_);
}

Tensor Tensor::reshaped(std::vector<std::size_t> extents,
                        std::vector<std::string> names) const {
  if (product(extents) != data_.size())
    throw ShapeError("reshape changes the element count");
  return Tensor(std::move(extents), std::move(names), data_);
}

Tensor make_tensor(std::vector<std::size_t> extents,
                   std::vector<std::string> names, std::vector<Scalar> data) {
  return Tensor(std::move(extents), std::move(names), std::move(data));
}

Tensor make_tensor(std::vector<std::size_t> extents,
                   std::vector<Scalar> data) {
  return Tensor(std::move(extents), std::move(data));
}

Tensor permute(const Tensor& t, const std::vector<std::size_t>& perm) {
  if (perm.size() != t.rank()) throw ShapeError("permutation rank mismatch");
  std::vector<std::size_t> extents(perm.size());
  std::vector<std::string> names(perm.size());
  for (std::size_t k = 0; k < perm.size(); ++k) {
    extents[k] = t.extents()[perm[k]];
    names[k] = t.names()[perm[k]];
  }
  std::vector<Scalar> data(t.size());
  Tensor out(std::move(extents), std::move(names), std::move(data));
  std::vector<std::size_t> src(t.rank());
  for (std::size_t lin = 0; lin < out.size(); ++lin) {
    std::vector<std::size_t> idx = out.multi_index(lin);
    for (std::size_t k = 0; k < perm.size(); ++k) src[perm[k]] = idx[k];
    out[lin] = t.at(src);
  }
  return out;
}

Tensor elementwise(BinaryOp op, const Tensor& a, const Tensor& b) {
  if (a.extents() != b.extents())
    throw ShapeError("elementwise operands must share extents");
  std::vector<Scalar> data(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    data[i] = combine(op, a[i], b[i]);
  return Tensor(a.extents(), a.names(), std::move(data));
}

Tensor evaluate_tensor(const Tensor& t, const Binding& env) {
  std::vector<Scalar> data(t.size());
  for (std::size_t i = 0; i < t.size(); ++i)
    data[i] = evaluate(t[i], env);
  return Tensor(t.extents(), t.names(), std::move(data));
}

namespace {

// Index-name groups participating in a contraction: each group lists the
// dimensions sharing one name (>= 2 of them).
struct ContractionPlan {
  std::vector<std::vector<std::size_t>> groups;
  std::vector<std::string> group_names;
  std::vector<std::size_t> free_dims;
};

ContractionPlan contraction_plan(const Tensor& t) {
  ContractionPlan plan;
  if (!t.has_names()) {
    if (t.rank() < 2) {
      for (std::size_t k = 0; k < t.rank(); ++k) plan.free_dims.push_back(k);
      return plan;
    }
    for (std::size_t k = 1; k < t.rank(); ++k) {
      if (t.extents()[k] != t.extents()[0])
        throw ShapeError(
            "contraction of an unnamed tensor requires equal extents");
    }
    std::vector<std::size_t> all(t.rank());
    for (std::size_t k = 0; k < t.rank(); ++k) all[k] = k;
    plan.groups.push_back(std::move(all));
    plan.group_names.emplace_back();
    return plan;
  }
  std::map<std::string, std::vector<std::size_t>> by_name;
  std::vector<std::string> order;
  for (std::size_t k = 0; k < t.rank(); ++k) {
    const std::string& n = t.names()[k];
    if (n.empty()) {
      plan.free_dims.push_back(k);
      continue;
    }
    if (by_name.find(n) == by_name.end()) order.push_back(n);
    by_name[n].push_back(k);
  }
  for (const std::string& n : order) {
    const auto& dims = by_name[n];
    if (dims.size() == 1) {
      plan.free_dims.push_back(dims[0]);
      continue;
    }
    for (std::size_t k : dims) {
      if (t.extents()[k] != t.extents()[dims[0]])
        throw ShapeError("repeated index '" + n + "' with unequal extents");
    }
    plan.groups.push_back(dims);
    plan.group_names.push_back(n);
  }
  std::sort(plan.free_dims.begin(), plan.free_dims.end());
  return plan;
}

}  // namespace

Tensor contraction(const Tensor& t, bool drop) {
  ContractionPlan plan = contraction_plan(t);
  if (plan.groups.empty()) return t;

  std::vector<std::size_t> out_extents;
  std::vector<std::string> out_names;
  for (std::size_t k : plan.free_dims) {
    out_extents.push_back(t.extents()[k]);
    out_names.push_back(t.names()[k]);
  }
  if (!drop) {
    for (std::size_t g = 0; g < plan.groups.size(); ++g) {
      out_extents.push_back(t.extents()[plan.groups[g][0]]);
      out_names.push_back(plan.group_names[g]);
    }
  }
  std::vector<Scalar> out_data(product(out_extents));
  Tensor out(std::move(out_extents), std::move(out_names),
             std::move(out_data));

  std::vector<std::size_t> src(t.rank());
  std::vector<std::size_t> diag(plan.groups.size());
  for (std::size_t lin = 0; lin < out.size(); ++lin) {
    std::vector<std::size_t> idx = out.multi_index(lin);
    for (std::size_t k = 0; k < plan.free_dims.size(); ++k)
      src[plan.free_dims[k]] = idx[k];
    if (!drop) {
      for (std::size_t g = 0; g < plan.groups.size(); ++g) {
        for (std::size_t k : plan.groups[g])
          src[k] = idx[plan.free_dims.size() + g];
      }
      out[lin] = t.at(src);
      continue;
    }
    // Sum independently over each group's diagonal.
    Scalar acc(0.0);
    std::fill(diag.begin(), diag.end(), 0);
    for (;;) {
      for (std::size_t g = 0; g < plan.groups.size(); ++g) {
        for (std::size_t k : plan.groups[g]) src[k] = diag[g];
      }
      acc = combine(BinaryOp::Add, acc, t.at(src));
      std::size_t g = 0;
      while (g < diag.size()) {
        if (++diag[g] < t.extents()[plan.groups[g][0]]) break;
        diag[g] = 0;
        ++g;
      }
      if (g == diag.size()) break;
    }
    out[lin] = acc;
  }
  return out;
}

namespace {

// Sums t over the dimensions carrying the given names (each name appears
// at most once after contraction); remaining dimensions keep their order.
Tensor sum_named(const Tensor& t, const std::set<std::string>& names) {
  if (names.empty()) return t;
  std::vector<std::size_t> keep;
  std::vector<std::size_t> sum_dims;
  for (std::size_t k = 0; k < t.rank(); ++k) {
    if (names.count(t.names()[k]))
      sum_dims.push_back(k);
    else
      keep.push_back(k);
  }
  if (sum_dims.empty()) return t;
  std::vector<std::size_t> out_extents;
  std::vector<std::string> out_names;
  for (std::size_t k : keep) {
    out_extents.push_back(t.extents()[k]);
    out_names.push_back(t.names()[k]);
  }
  Tensor out(out_extents, out_names,
             std::vector<Scalar>(product(out_extents)));
  std::vector<std::size_t> src(t.rank());
  for (std::size_t lin = 0; lin < out.size(); ++lin) {
    std::vector<std::size_t> idx = out.multi_index(lin);
    for (std::size_t k = 0; k < keep.size(); ++k) src[keep[k]] = idx[k];
    Scalar acc(0.0);
    std::vector<std::size_t> cnt(sum_dims.size(), 0);
    for (;;) {
      for (std::size_t k = 0; k < sum_dims.size(); ++k)
        src[sum_dims[k]] = cnt[k];
      acc = combine(BinaryOp::Add, acc, t.at(src));
      std::size_t k = 0;
      while (k < cnt.size()) {
        if (++cnt[k] < t.extents()[sum_dims[k]]) break;
        cnt[k] = 0;
        ++k;
      }
      if (k == cnt.size()) break;
    }
    out[lin] = acc;
  }
  return out;
}

// Aligned product of two fully contracted tensors: result dimensions are
// a-only, then b-only, then the shared names (in a's order); entries are
// products with the shared indices equal on both sides.
Tensor multiply_align(const Tensor& a, const Tensor& b) {
  std::set<std::string> a_names(a.names().begin(), a.names().end());
  std::vector<std::size_t> a_only, b_only, a_shared;
  std::vector<std::size_t> b_pos_of_shared;  // parallel to a_shared
  std::map<std::string, std::size_t> b_index;
  for (std::size_t k = 0; k < b.rank(); ++k) b_index[b.names()[k]] = k;
  for (std::size_t k = 0; k < a.rank(); ++k) {
    auto it = b_index.find(a.names()[k]);
    if (it == b_index.end()) {
      a_only.push_back(k);
    } else {
      if (b.extents()[it->second] != a.extents()[k])
        throw ShapeError("index '" + a.names()[k] +
                         "' has mismatched extents");
      a_shared.push_back(k);
      b_pos_of_shared.push_back(it->second);
    }
  }
  for (std::size_t k = 0; k < b.rank(); ++k) {
    if (!a_names.count(b.names()[k])) b_only.push_back(k);
  }

  std::vector<std::size_t> out_extents;
  std::vector<std::string> out_names;
  for (std::size_t k : a_only) {
    out_extents.push_back(a.extents()[k]);
    out_names.push_back(a.names()[k]);
  }
  for (std::size_t k : b_only) {
    out_extents.push_back(b.extents()[k]);
    out_names.push_back(b.names()[k]);
  }
  for (std::size_t k : a_shared) {
    out_extents.push_back(a.extents()[k]);
    out_names.push_back(a.names()[k]);
  }
  Tensor out(out_extents, out_names,
             std::vector<Scalar>(product(out_extents)));
  std::vector<std::size_t> ia(a.rank()), ib(b.rank());
  for (std::size_t lin = 0; lin < out.size(); ++lin) {
    std::vector<std::size_t> idx = out.multi_index(lin);
    std::size_t pos = 0;
    for (std::size_t k : a_only) ia[k] = idx[pos++];
    for (std::size_t k : b_only) ib[k] = idx[pos++];
    for (std::size_t k = 0; k < a_shared.size(); ++k) {
      ia[a_shared[k]] = idx[pos];
      ib[b_pos_of_shared[k]] = idx[pos];
      ++pos;
    }
    out[lin] = combine(BinaryOp::Mul, a.at(ia), b.at(ib));
  }
  return out;
}

void require_named(const Tensor& t) {
  for (const std::string& n : t.names()) {
    if (n.empty())
      throw ShapeError("Einstein summation requires every dimension named");
  }
}

// Occurrences of each index name across the operand list, counting
// repeats within one operand; also validates extents.
std::map<std::string, std::size_t> index_counts(
    const std::vector<Tensor>& operands) {
  std::map<std::string, std::size_t> counts;
  std::map<std::string, std::size_t> extents;
  for (const Tensor& t : operands) {
    for (std::size_t k = 0; k < t.rank(); ++k) {
      const std::string& n = t.names()[k];
      ++counts[n];
      auto it = extents.find(n);
      if (it == extents.end())
        extents[n] = t.extents()[k];
      else if (it->second != t.extents()[k])
        throw ShapeError("index '" + n + "' has mismatched extents");
    }
  }
  return counts;
}

}  // namespace

Tensor einstein(const std::vector<Tensor>& operands) {
  if (operands.empty()) throw ShapeError("no operands");
  for (const Tensor& t : operands) require_named(t);
  std::map<std::string, std::size_t> counts = index_counts(operands);

  // Free indices in first-appearance order define the output.
  std::vector<std::string> free_order;
  for (const Tensor& t : operands) {
    for (const std::string& n : t.names()) {
      if (counts[n] == 1) free_order.push_back(n);
    }
  }

  // Names still needed by operands k+1.. may not be summed yet.
  auto sum_finished = [&](const Tensor& acc, std::size_t next) {
    std::set<std::string> remaining;
    for (std::size_t m = next; m < operands.size(); ++m) {
      for (const std::string& n : operands[m].names()) remaining.insert(n);
    }
    std::set<std::string> finished;
    for (const std::string& n : acc.names()) {
      if (counts[n] >= 2 && !remaining.count(n)) finished.insert(n);
    }
    return sum_named(acc, finished);
  };

  Tensor acc = sum_finished(contraction(operands[0], false), 1);
  for (std::size_t k = 1; k < operands.size(); ++k) {
    Tensor b = contraction(operands[k], false);
    acc = sum_finished(multiply_align(acc, b), k + 1);
  }

  // Reorder the surviving free dimensions by first appearance.
  std::vector<std::size_t> perm;
  for (const std::string& n : free_order) {
    for (std::size_t k = 0; k < acc.rank(); ++k) {
      if (acc.names()[k] == n) {
        perm.push_back(k);
        break;
      }
    }
  }
  return permute(acc, perm);
}

std::optional<Tensor> einstein_pair_fast(const Tensor& a, const Tensor& b) {
  require_named(a);
  require_named(b);
  if (!a.all_numeric() || !b.all_numeric()) return std::nullopt;
  std::map<std::string, std::size_t> counts = index_counts({a, b});

  Tensor ca = contraction(a, false);
  Tensor cb = contraction(b, false);
  std::set<std::string> nb(cb.names().begin(), cb.names().end());

  std::vector<std::size_t> rows, shared;
  for (std::size_t k = 0; k < ca.rank(); ++k) {
    if (nb.count(ca.names()[k]))
      shared.push_back(k);
    else if (counts[ca.names()[k]] >= 2)
      return std::nullopt;  // summed index not expressible as a matmul
    else
      rows.push_back(k);
  }
  std::vector<std::size_t> cols;
  std::set<std::string> na(ca.names().begin(), ca.names().end());
  for (std::size_t k = 0; k < cb.rank(); ++k) {
    if (!na.count(cb.names()[k])) {
      if (counts[cb.names()[k]] >= 2) return std::nullopt;
      cols.push_back(k);
    }
  }

  // Permute to (rows..., shared...) and (shared..., cols...), with the
  // shared block ordered identically on both sides.
  std::vector<std::size_t> pa = rows;
  pa.insert(pa.end(), shared.begin(), shared.end());
  std::vector<std::size_t> pb;
  for (std::size_t k : shared) {
    for (std::size_t m = 0; m < cb.rank(); ++m) {
      if (cb.names()[m] == ca.names()[k]) {
        pb.push_back(m);
        break;
      }
    }
  }
  pb.insert(pb.end(), cols.begin(), cols.end());
  Tensor ta = permute(ca, pa);
  Tensor tb = permute(cb, pb);

  std::size_t ni = 1, nk = 1, nj = 1;
  for (std::size_t k : rows) ni *= ca.extents()[k];
  for (std::size_t k : shared) nk *= ca.extents()[k];
  for (std::size_t k : cols) nj *= cb.extents()[k];

  // Column-major tensor data maps directly onto column-major matrices.
  Eigen::MatrixXd ma(ni, nk), mb(nk, nj);
  for (std::size_t i = 0; i < ta.size(); ++i)
    ma.data()[i] = ta[i].number();
  for (std::size_t i = 0; i < tb.size(); ++i)
    mb.data()[i] = tb[i].number();
  Eigen::MatrixXd mc = ma * mb;

  std::vector<std::size_t> out_extents;
  std::vector<std::string> out_names;
  for (std::size_t k : rows) {
    out_extents.push_back(ca.extents()[k]);
    out_names.push_back(ca.names()[k]);
  }
  for (std::size_t k : cols) {
    out_extents.push_back(cb.extents()[k]);
    out_names.push_back(cb.names()[k]);
  }
  std::vector<Scalar> data(ni * nj);
  for (std::size_t i = 0; i < data.size(); ++i) data[i] = mc.data()[i];
  return Tensor(std::move(out_extents), std::move(out_names),
                std::move(data));
}

int permutation_parity(const std::vector<std::size_t>& perm) {
  std::vector<bool> seen(perm.size(), false);
  std::size_t cycles = 0;
  for (std::size_t k = 0; k < perm.size(); ++k) {
    if (seen[k]) continue;
    ++cycles;
    std::size_t j = k;
    while (!seen[j]) {
      seen[j] = true;
      j = perm[j];
    }
  }
  return (perm.size() - cycles) % 2 == 0 ? 1 : -1;
}

Tensor epsilon(std::size_t n) {
  if (n == 0) throw std::invalid_argument("epsilon requires n >= 1");
  std::vector<std::size_t> extents(n, n);
  Tensor out(extents, std::vector<Scalar>(product(extents)));
  for (std::size_t lin = 0; lin < out.size(); ++lin) {
    std::vector<std::size_t> idx = out.multi_index(lin);
    std::vector<bool> seen(n, false);
    bool repeated = false;
    for (std::size_t v : idx) {
      if (seen[v]) {
        repeated = true;
        break;
      }
      seen[v] = true;
    }
    out[lin] = repeated ? 0.0 : static_cast<double>(permutation_parity(idx));
  }
  return out;
}

Tensor delta(std::size_t n, std::size_t p) {
  if (n == 0 || p == 0) throw std::invalid_argument("delta requires n,p >= 1");
  std::vector<std::size_t> extents(2 * p, n);
  Tensor out(extents, std::vector<Scalar>(product(extents)));
  for (std::size_t lin = 0; lin < out.size(); ++lin) {
    std::vector<std::size_t> idx = out.multi_index(lin);
    // Position of each value among the lower indices, if the lower tuple
    // is a permutation of the (distinct) upper tuple.
    std::vector<std::size_t> where(n, p);
    bool ok = true;
    for (std::size_t k = 0; k < p && ok; ++k) {
      std::size_t v = idx[p + k];
      if (where[v] != p) ok = false;
      where[v] = k;
    }
    std::vector<std::size_t> perm(p);
    std::vector<bool> used(p, false);
    for (std::size_t k = 0; k < p && ok; ++k) {
      std::size_t v = idx[k];
      std::size_t pos = where[v];
      if (pos == p || used[pos]) {
        ok = false;
        break;
      }
      used[pos] = true;
      perm[k] = pos;
    }
    out[lin] = ok ? static_cast<double>(permutation_parity(perm)) : 0.0;
  }
  return out;
}

Tensor cross(const std::vector<Tensor>& vectors) {
  if (vectors.empty()) throw ShapeError("cross requires n-1 vectors");
  std::size_t n = vectors.size() + 1;
  for (const Tensor& v : vectors) {
    if (v.rank() != 1 || v.extents()[0] != n)
      throw ShapeError("cross requires n-1 vectors of length n");
  }
  std::vector<Scalar> out(n, Scalar(0.0));
  // component k = sum over distinct (i_1..i_{n-1}) of
  //   parity(k, i_1..i_{n-1}) * v_1[i_1] * ... * v_{n-1}[i_{n-1}]
  std::vector<std::size_t> idx(n - 1, 0);
  for (;;) {
    std::vector<bool> seen(n, false);
    bool repeated = false;
    for (std::size_t v : idx) {
      if (seen[v]) {
        repeated = true;
        break;
      }
      seen[v] = true;
    }
    if (!repeated) {
      std::size_t k = 0;
      while (seen[k]) ++k;
      std::vector<std::size_t> full;
      full.push_back(k);
      full.insert(full.end(), idx.begin(), idx.end());
      double sign = permutation_parity(full);
      Scalar term(sign);
      for (std::size_t m = 0; m < vectors.size(); ++m)
        term = combine(BinaryOp::Mul, term, vectors[m][idx[m]]);
      out[k] = combine(BinaryOp::Add, out[k], term);
    }
    std::size_t m = 0;
    while (m < idx.size()) {
      if (++idx[m] < n) break;
      idx[m] = 0;
      ++m;
    }
    if (m == idx.size()) break;
  }
  return Tensor({n}, std::move(out));
}

Scalar inner(const Tensor& a, const Tensor& b) {
  if (a.extents() != b.extents())
    throw ShapeError("inner product requires identical extents");
  Scalar acc(0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    acc = combine(BinaryOp::Add, acc, combine(BinaryOp::Mul, a[i], b[i]));
  return acc;
}

Tensor dot(const Tensor& a, const Tensor& b) {
  if (b.rank() > a.rank())
    throw ShapeError("dot requires rank(a) >= rank(b)");
  std::size_t lead = a.rank() - b.rank();
  for (std::size_t k = 0; k < b.rank(); ++k) {
    if (a.extents()[lead + k] != b.extents()[k])
      throw ShapeError("trailing extents of a must equal extents of b");
  }
  std::vector<std::size_t> out_extents(a.extents().begin(),
                                       a.extents().begin() + lead);
  Tensor out(out_extents, std::vector<Scalar>(product(out_extents)));
  std::vector<std::size_t> ia(a.rank());
  for (std::size_t lin = 0; lin < out.size(); ++lin) {
    std::vector<std::size_t> idx = out.multi_index(lin);
    std::copy(idx.begin(), idx.end(), ia.begin());
    Scalar acc(0.0);
    for (std::size_t j = 0; j < b.size(); ++j) {
      std::vector<std::size_t> jb = b.multi_index(j);
      std::copy(jb.begin(), jb.end(), ia.begin() + lead);
      acc = combine(BinaryOp::Add, acc, combine(BinaryOp::Mul, a.at(ia), b[j]));
    }
    out[lin] = acc;
  }
  return out;
}

Tensor outer(const Tensor& a, const Tensor& b) {
  std::vector<std::size_t> extents = a.extents();
  extents.insert(extents.end(), b.extents().begin(), b.extents().end());
  std::vector<std::string> names = a.names();
  names.insert(names.end(), b.names().begin(), b.names().end());
  std::vector<Scalar> data(a.size() * b.size());
  // Column-major: a's indices vary fastest in the concatenated layout.
  for (std::size_t j = 0; j < b.size(); ++j) {
    for (std::size_t i = 0; i < a.size(); ++i)
      data[j * a.size() + i] = combine(BinaryOp::Mul, a[i], b[j]);
  }
  return Tensor(std::move(extents), std::move(names), std::move(data));
}

Tensor kron(const Tensor& a, const Tensor& b) {
  if (a.rank() != b.rank())
    throw ShapeError("kron requires equal ranks");
  std::vector<std::size_t> extents(a.rank());
  for (std::size_t k = 0; k < a.rank(); ++k)
    extents[k] = a.extents()[k] * b.extents()[k];
  Tensor out(extents, std::vector<Scalar>(product(extents)));
  std::vector<std::size_t> ia(a.rank()), ib(b.rank());
  for (std::size_t lin = 0; lin < out.size(); ++lin) {
    std::vector<std::size_t> idx = out.multi_index(lin);
    for (std::size_t k = 0; k < a.rank(); ++k) {
      ia[k] = idx[k] / b.extents()[k];
      ib[k] = idx[k] % b.extents()[k];
    }
    out[lin] = combine(BinaryOp::Mul, a.at(ia), b.at(ib));
  }
  return out;
}

}  // namespace calc
