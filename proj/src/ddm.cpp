#include "helmddm/ddm.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <unordered_map>

namespace helmddm {

namespace {

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - t0)
      .count();
}

uint64_t fnv1a(uint64_t h, const void* data, size_t bytes) {
  const unsigned char* p = static_cast<const unsigned char*>(data);
  for (size_t i = 0; i < bytes; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

uint64_t op_hash(const DiscreteOperator& op) {
  uint64_t h = 1469598103934665603ull;
  const int dims[2] = {op.win.nx, op.win.ny};
  h = fnv1a(h, dims, sizeof dims);
  h = fnv1a(h, op.a1_node.data(), op.a1_node.size() * sizeof(Complex));
  h = fnv1a(h, op.inv_a1_half.data(), op.inv_a1_half.size() * sizeof(Complex));
  h = fnv1a(h, op.a2_node.data(), op.a2_node.size() * sizeof(Complex));
  h = fnv1a(h, op.inv_a2_half.data(), op.inv_a2_half.size() * sizeof(Complex));
  h = fnv1a(h, op.k2.data(), op.k2.size() * sizeof(double));
  return h;
}

bool op_equal(const DiscreteOperator& a, const DiscreteOperator& b) {
  auto eq = [](const auto& u, const auto& v) {
    return u.size() == v.size() &&
           (u.empty() || std::memcmp(u.data(), v.data(),
                                     u.size() * sizeof(u[0])) == 0);
  };
  return a.win.nx == b.win.nx && a.win.ny == b.win.ny &&
         eq(a.a1_node, b.a1_node) && eq(a.inv_a1_half, b.inv_a1_half) &&
         eq(a.a2_node, b.a2_node) && eq(a.inv_a2_half, b.inv_a2_half) &&
         eq(a.k2, b.k2);
}

FieldGrid make_field(const GridWindow& win, double h) {
  FieldGrid f;
  f.win = win;
  f.h = h;
  f.v.assign(win.size(), Complex(0));
  return f;
}

}  // namespace

DdmEngine::DdmEngine(const DdmConfig& cfg)
    : cfg_(cfg), part_(build_partition(cfg.grid)), pool_(cfg.threads) {
  const GridSpec& g = part_.g;
  // Windows reach n_ext nodes past the interior; the medium must answer there.
  cfg_.medium.margin =
      std::max(cfg_.medium.margin, (g.n_ext() + 1) * g.h);
  sigma0_ = cfg_.sigma0 > 0
                ? cfg_.sigma0
                : default_sigma0(cfg_.c_sigma, cfg_.medium.k_min(),
                                 g.n_ramp * g.h);
  gop_ = build_operator(g, g.global_window(), global_layout(g), cfg_.medium,
                        sigma0_);
  build_classes();

  const long nsub = long(g.n1) * g.n2;
  curr_.reserve(nsub);
  prev1_.reserve(nsub);
  prev2_.reserve(nsub);
  rhs_.reserve(nsub);
  scratch_.resize(nsub);
  owned_.resize(nsub);
  for (long t = 0; t < nsub; ++t) {
    const int i = int(t % g.n1), j = int(t / g.n1);
    const SubdomainWindow& s = part_.sub(i, j);
    curr_.push_back(make_field(s.win, g.h));
    prev1_.push_back(make_field(s.win, g.h));
    prev2_.push_back(make_field(s.win, g.h));
    rhs_.push_back(make_field(s.win, g.h));
    const int mcx = g.core_cells_x(), mcy = g.core_cells_y(), e = g.n_ext();
    owned_[t] = {i == 0 ? 0 : e + i * mcx + 1,
                 i == g.n1 - 1 ? g.nodes_x() - 1 : e + (i + 1) * mcx,
                 j == 0 ? 0 : e + j * mcy + 1,
                 j == g.n2 - 1 ? g.nodes_y() - 1 : e + (j + 1) * mcy};
  }
  zc_.assign(nsub, 1);
  zp1_.assign(nsub, 1);
  zp2_.assign(nsub, 1);
  assembled_.assign(n_global(), Complex(0));
  tmp_.assign(n_global(), Complex(0));
}

void DdmEngine::build_classes() {
  const GridSpec& g = part_.g;
  const long nsub = long(g.n1) * g.n2;
  class_of_.assign(nsub, -1);
  std::unordered_map<uint64_t, std::vector<int>> buckets;
  for (long t = 0; t < nsub; ++t) {
    const SubdomainWindow& s = part_.sub(int(t % g.n1), int(t / g.n1));
    DiscreteOperator op =
        build_operator(g, s.win, layout_for(s), cfg_.medium, sigma0_);
    const uint64_t h = op_hash(op);
    int cls = -1;
    for (int c : buckets[h])
      if (op_equal(classes_[c]->op, op)) {
        cls = c;
        break;
      }
    if (cls < 0) {
      cls = int(classes_.size());
      auto oc = std::make_unique<OpClass>();
      oc->op = std::move(op);
      classes_.push_back(std::move(oc));
      buckets[h].push_back(cls);
    }
    class_of_[t] = cls;
    ++classes_[cls]->members;
  }
  const auto t0 = std::chrono::steady_clock::now();
  pool_.parallel_for(long(classes_.size()), [&](long c) {
    OpClass& oc = *classes_[c];
    oc.fact.factor(oc.op.assemble(),
                   cfg_.force_lu
                       ? std::vector<int>{}
                       : grid_nd_order(oc.op.win.nx, oc.op.win.ny));
  });
  factor_ms_ = ms_since(t0);
}

std::vector<OpClassInfo> DdmEngine::class_info() const {
  std::vector<OpClassInfo> out;
  for (const auto& c : classes_)
    out.push_back({c->members, c->fact.backend(), c->fact.factor_nonzeros(),
                   c->fact.probe_relres()});
  return out;
}

void DdmEngine::apply_global(const Complex* u, Complex* out) const {
  gop_.apply(u, out);
}

void DdmEngine::reset_state() {
  std::fill(zc_.begin(), zc_.end(), char(1));
  std::fill(zp1_.begin(), zp1_.end(), char(1));
  std::fill(zp2_.begin(), zp2_.end(), char(1));
  std::fill(assembled_.begin(), assembled_.end(), Complex(0));
}

bool DdmEngine::restrict_owned(long t, const Complex* f, FieldGrid& rhs) const {
  const auto& o = owned_[t];
  const int gnx = part_.g.nodes_x();
  bool any = false;
  for (int q = o[2]; q <= o[3]; ++q)
    for (int p = o[0]; p <= o[1]; ++p) {
      const Complex val = f[size_t(q) * gnx + p];
      if (val != Complex(0)) {
        rhs.at(p, q) = val;
        any = true;
      }
    }
  return any;
}

void DdmEngine::sweep(int s, const Complex* f, DdmStats& st) {
  const GridSpec& g = part_.g;
  const int n1 = g.n1, n2 = g.n2, nov = g.n_overlap;
  const long nsub = long(n1) * n2;
  std::vector<char> did(nsub, 0);
  pool_.parallel_for(nsub, [&](long t) {
    const int i = int(t % n1), j = int(t / n1);
    const SubdomainWindow& tw = part_.sub(i, j);
    FieldGrid& rhs = rhs_[t];
    rhs.fill_zero();
    bool any = false;
    if (s == 1 && f) any |= restrict_owned(t, f, rhs);
    const DiscreteOperator& op = classes_[class_of_[t]]->op;
    for (Dir d : kGatherOrder) {
      const DirDelta o = source_offset(d);
      const int si = i + o.di, sj = j + o.dj;
      if (si < 0 || si >= n1 || sj < 0 || sj >= n2) continue;
      const long sidx = long(sj) * n1 + si;
      const bool corner = is_corner(d);
      if ((corner ? zp2_ : zp1_)[sidx]) continue;
      add_transfer(d, op, tw, nov, corner ? prev2_[sidx] : prev1_[sidx], rhs,
                   scratch_[t]);
      any = true;
    }
    if (!any) {
      zc_[t] = 1;
      return;
    }
    zc_[t] = 0;
    op.scale_rhs(rhs.v.data(), rhs.v.data());
    classes_[class_of_[t]]->fact.solve(rhs.v.data(), curr_[t].v.data());
    did[t] = 1;
  });
  for (long t = 0; t < nsub; ++t) did[t] ? ++st.solves : ++st.skipped;
  for (long t = 0; t < nsub; ++t)
    if (!zc_[t]) accumulate_weighted(t);
  std::swap(prev2_, prev1_);
  std::swap(prev1_, curr_);
  std::swap(zp2_, zp1_);
  std::swap(zp1_, zc_);
}

void DdmEngine::accumulate_weighted(long t) {
  const GridSpec& g = part_.g;
  const int i = int(t % g.n1), j = int(t / g.n1);
  const SubdomainWindow& s = part_.sub(i, j);
  const BlendWeights& bw = part_.weight(i, j);
  const int nov = g.n_overlap, gnx = g.nodes_x();
  const int x0 = s.left_interior ? s.cx0 - nov : s.win.x0;
  const int x1 = s.right_interior ? s.cx1 + nov : s.win.x0 + s.win.nx - 1;
  const int y0 = s.bottom_interior ? s.cy0 - nov : s.win.y0;
  const int y1 = s.top_interior ? s.cy1 + nov : s.win.y0 + s.win.ny - 1;
  const FieldGrid& u = curr_[t];
  for (int q = y0; q <= y1; ++q) {
    const double wy = bw.wy[q - s.win.y0];
    if (wy == 0) continue;
    for (int p = x0; p <= x1; ++p) {
      const double w = bw.wx[p - s.win.x0] * wy;
      if (w != 0) assembled_[size_t(q) * gnx + p] += w * u.at(p, q);
    }
  }
}

double DdmEngine::residual_norm(const Complex* f) const {
  gop_.apply(assembled_.data(), tmp_.data());
  double s = 0;
  for (size_t i = 0; i < tmp_.size(); ++i) s += std::norm(f[i] - tmp_[i]);
  return std::sqrt(s);
}

FieldGrid DdmEngine::solve_iterative(const std::vector<Complex>& f, double tol,
                                     int max_steps, DdmStats& stats,
                                     int check_every) {
  if (f.size() != n_global()) throw SolveError("source vector size mismatch");
  if (check_every < 1) check_every = 1;
  reset_state();
  double b2 = 0;
  for (const Complex& c : f) b2 += std::norm(c);
  const double bnorm = std::sqrt(b2);
  FieldGrid out = make_field(part_.g.global_window(), part_.g.h);
  if (bnorm == 0) {
    stats.converged = true;
    stats.relres = 0;
    return out;
  }
  for (int s = 1; s <= max_steps; ++s) {
    const auto t0 = std::chrono::steady_clock::now();
    sweep(s, f.data(), stats);
    stats.steps = s;
    if (s % check_every == 0 || s == max_steps) {
      const double rel = residual_norm(f.data()) / bnorm;
      stats.history.push_back({s, rel, ms_since(t0)});
      stats.sweep_ms += stats.history.back().wall_ms;
      stats.relres = rel;
      if (rel <= tol) {
        stats.converged = true;
        break;
      }
    } else {
      stats.sweep_ms += ms_since(t0);
    }
  }
  out.v = assembled_;
  return out;
}

void DdmEngine::precondition(const Complex* r, Complex* z, int ksteps,
                             DdmStats& stats) {
  reset_state();
  const auto t0 = std::chrono::steady_clock::now();
  for (int s = 1; s <= ksteps; ++s) sweep(s, r, stats);
  stats.sweep_ms += ms_since(t0);
  std::copy(assembled_.begin(), assembled_.end(), z);
}

}  // namespace helmddm
