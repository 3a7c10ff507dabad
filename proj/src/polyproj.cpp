#include "mixsmooth/polyproj.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace mixsmooth {

namespace {

using RPoly = std::vector<Rational>;

// <u^a, u^b> on [0,1]
Rational moment(std::size_t a, std::size_t b)
{
    return Rational(1, static_cast<long>(a + b + 1));
}

Rational inner(const RPoly& p, const RPoly& q)
{
    Rational s = 0;
    for (std::size_t a = 0; a < p.size(); ++a) {
        if (p[a] == 0)
            continue;
        for (std::size_t b = 0; b < q.size(); ++b)
            if (q[b] != 0)
                s += p[a] * q[b] * moment(a, b);
    }
    return s;
}

}  // namespace

OrthoBasis1D::OrthoBasis1D(int l) : l_(l)
{
    if (l < 0)
        throw std::invalid_argument("ortho_basis: negative degree");
    for (int i = 0; i <= l; ++i) {
        RPoly q(static_cast<std::size_t>(i) + 1, Rational(0));
        q[static_cast<std::size_t>(i)] = 1;
        RPoly mono = q;
        for (int k = 0; k < i; ++k) {
            const Rational c = inner(mono, monic_[static_cast<std::size_t>(k)]) / norm2_[static_cast<std::size_t>(k)];
            const auto& qk = monic_[static_cast<std::size_t>(k)];
            for (std::size_t a = 0; a < qk.size(); ++a)
                q[a] -= c * qk[a];
        }
        norm2_.push_back(inner(q, q));
        monic_.push_back(q);
        const double scale = 1.0 / std::sqrt(static_cast<double>(norm2_.back()));
        std::vector<double> m;
        for (const auto& r : q)
            m.push_back(static_cast<double>(r) * scale);
        mono_.push_back(std::move(m));
    }
}

double OrthoBasis1D::eval(int i, double u) const
{
    if (i < 0 || i > l_)
        throw std::out_of_range("OrthoBasis1D::eval: index beyond degree");
    std::vector<double> v(static_cast<std::size_t>(i) + 1);
    eval_all(u, v);
    return v.back();
}

void OrthoBasis1D::eval_all(double u, std::span<double> out) const
{
    // pi_i(u) = sqrt(2i+1) P_i(2u-1)
    const double y = 2.0 * u - 1.0;
    double p0 = 1.0, p1 = y;
    const std::size_t n = std::min(out.size(), static_cast<std::size_t>(l_) + 1);
    for (std::size_t i = 0; i < n; ++i) {
        double pi;
        if (i == 0)
            pi = 1.0;
        else if (i == 1)
            pi = y;
        else {
            const double k = static_cast<double>(i - 1);
            pi = ((2.0 * k + 1.0) * y * p1 - k * p0) / (k + 1.0);
            p0 = p1;
            p1 = pi;
        }
        out[i] = std::sqrt(2.0 * static_cast<double>(i) + 1.0) * pi;
    }
}

Matrix OrthoBasis1D::to_monomial() const
{
    const auto n = static_cast<std::size_t>(l_) + 1;
    Matrix m(n, n);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < mono_[k].size(); ++i)
            m(i, k) = mono_[k][i];
    return m;
}

const OrthoBasis1D& ortho_basis(int l)
{
    static std::mutex mu;
    static std::map<int, std::unique_ptr<OrthoBasis1D>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[l];
    if (!slot)
        slot = std::make_unique<OrthoBasis1D>(l);
    return *slot;
}

TensorPoly::TensorPoly(Box box, MultiIndex l) : box_(std::move(box)), l_(std::move(l))
{
    if (box_.dim() != l_.size())
        throw std::invalid_argument("TensorPoly: box/degree dimension mismatch");
    if (!l_.all_nonnegative())
        throw std::invalid_argument("TensorPoly: negative degree");
    std::size_t n = 1;
    for (int k : l_)
        n *= static_cast<std::size_t>(k + 1);
    c_.assign(n, 0.0);
}

TensorPoly::TensorPoly(Box box, MultiIndex l, std::vector<double> coeffs) : TensorPoly(std::move(box), std::move(l))
{
    if (coeffs.size() != c_.size())
        throw std::invalid_argument("TensorPoly: coefficient count mismatch");
    c_ = std::move(coeffs);
}

double TensorPoly::coeff(const MultiIndex& lambda) const
{
    if (!lambda.all_nonnegative() || !lambda.leq(l_))
        return 0.0;
    return c_[IntBox(MultiIndex(l_.size()), l_).linear_index(lambda)];
}

double TensorPoly::operator()(std::span<const double> x) const
{
    const std::size_t d = l_.size();
    std::vector<std::vector<double>> vals(d);
    for (std::size_t j = 0; j < d; ++j) {
        vals[j].resize(static_cast<std::size_t>(l_[j]) + 1);
        ortho_basis(l_[j]).eval_all((x[j] - box_.corner()[j]) / box_.edge()[j], vals[j]);
    }
    double acc = 0.0;
    std::size_t pos = 0;
    IntBox(MultiIndex(d), l_).for_each([&](const MultiIndex& lam) {
        double t = c_[pos++];
        for (std::size_t j = 0; j < d && t != 0.0; ++j)
            t *= vals[j][static_cast<std::size_t>(lam[j])];
        acc += t;
    });
    return acc;
}

Poly TensorPoly::to_poly() const
{
    std::vector<double> c = c_;
    std::vector<std::size_t> dims;
    for (int k : l_)
        dims.push_back(static_cast<std::size_t>(k) + 1);
    for (std::size_t j = 0; j < l_.size(); ++j)
        c = apply_along_axis(c, dims, j, ortho_basis(l_[j]).to_monomial());
    return Poly(box_, l_, std::move(c));
}

double TensorPoly::l2_norm() const
{
    double s = 0.0;
    for (double v : c_)
        s += v * v;
    return std::sqrt(s * box_.volume());
}

QuadSpec projection_quad(const FunctionOracle& f, const MultiIndex& l)
{
    QuadSpec q;
    q.nodes = l.max() + 3;
    if (f.poly_degree) {
        for (std::size_t j = 0; j < l.size(); ++j)
            q.nodes = std::max(q.nodes, ((*f.poly_degree)[j] + l[j] + 2) / 2);
    }
    return q;
}

TensorPoly project(const FunctionOracle& f, const Box& box, const MultiIndex& l, std::optional<QuadSpec> quad,
                   ProjectionDiagnostics* diag)
{
    const std::size_t d = l.size();
    if (box.dim() != d)
        throw std::invalid_argument("project: box/degree dimension mismatch");
    if (!l.all_nonnegative())
        throw std::invalid_argument("project: negative degree");
    const QuadSpec q = quad ? *quad : projection_quad(f, l);
    if (diag && quad && f.poly_degree) {
        const QuadSpec need = projection_quad(f, l);
        if (q.nodes * q.subdivisions < need.nodes && q.subdivisions == 1) {
            diag->under_integrated = true;
            std::ostringstream os;
            os << "quadrature with " << q.nodes << " nodes is not exact for degree " << f.poly_degree->str()
               << " against basis degree " << l.str() << "; need " << need.nodes;
            diag->message = os.str();
        }
    }

    // Nodes on [0,1] and the per-axis weighting matrices W_j(i, node) = w pi_i(u).
    std::vector<double> u, w;
    composite_points_1d(0.0, 1.0, q.nodes, q.subdivisions, u, w);
    const std::size_t n = u.size();
    std::vector<Matrix> weight(d);
    for (std::size_t j = 0; j < d; ++j) {
        const auto rows = static_cast<std::size_t>(l[j]) + 1;
        weight[j] = Matrix(rows, n);
        std::vector<double> vals(rows);
        for (std::size_t k = 0; k < n; ++k) {
            ortho_basis(l[j]).eval_all(u[k], vals);
            for (std::size_t i = 0; i < rows; ++i)
                weight[j](i, k) = w[k] * vals[i];
        }
    }

    std::size_t total = 1;
    for (std::size_t j = 0; j < d; ++j)
        total *= n;
    std::vector<double> values(total);
    std::vector<std::size_t> idx(d, 0);
    Point x(d);
    for (std::size_t pos = 0; pos < total; ++pos) {
        for (std::size_t j = 0; j < d; ++j)
            x[j] = box.corner()[j] + box.edge()[j] * u[idx[j]];
        values[pos] = f(x);
        for (std::size_t j = d; j-- > 0;) {
            if (++idx[j] < n)
                break;
            idx[j] = 0;
        }
    }
    std::vector<std::size_t> dims(d, n);
    for (std::size_t j = 0; j < d; ++j)
        values = apply_along_axis(values, dims, j, weight[j]);
    return TensorPoly(box, l, std::move(values));
}

namespace {

class IdentityOp final : public AxisOperator {
public:
    double apply(const Fn1D& g, double x) const override { return g(x); }
    std::string describe() const override { return "I"; }
};

class ProjectorOp final : public AxisOperator {
public:
    ProjectorOp(double corner, double edge, int l, QuadSpec q) : corner_(corner), edge_(edge), l_(l), q_(q)
    {
        if (!(edge > 0.0))
            throw std::invalid_argument("projector_op: nonpositive edge");
        if (l < 0)
            throw std::invalid_argument("projector_op: negative degree");
        if (q_.nodes < l + 1)
            q_.nodes = l + 3;
    }
    double apply(const Fn1D& g, double x) const override
    {
        std::vector<double> u, w;
        composite_points_1d(0.0, 1.0, q_.nodes, q_.subdivisions, u, w);
        const auto rows = static_cast<std::size_t>(l_) + 1;
        std::vector<double> c(rows, 0.0), vals(rows);
        const OrthoBasis1D& basis = ortho_basis(l_);
        for (std::size_t k = 0; k < u.size(); ++k) {
            const double gv = g(corner_ + edge_ * u[k]);
            basis.eval_all(u[k], vals);
            for (std::size_t i = 0; i < rows; ++i)
                c[i] += w[k] * gv * vals[i];
        }
        basis.eval_all((x - corner_) / edge_, vals);
        double acc = 0.0;
        for (std::size_t i = 0; i < rows; ++i)
            acc += c[i] * vals[i];
        return acc;
    }
    std::string describe() const override
    {
        std::ostringstream os;
        os << "P[" << corner_ << "," << corner_ + edge_ << ";" << l_ << "]";
        return os.str();
    }

private:
    double corner_, edge_;
    int l_;
    QuadSpec q_;
};

class MaskedOp final : public AxisOperator {
public:
    MaskedOp(double lo, double width, AxisOp inner) : lo_(lo), width_(width), inner_(std::move(inner)) {}
    double apply(const Fn1D& g, double x) const override
    {
        if (x < lo_ || x >= lo_ + width_)
            return 0.0;
        return inner_->apply(g, x);
    }
    std::string describe() const override { return "M(" + inner_->describe() + ")"; }

private:
    double lo_, width_;
    AxisOp inner_;
};

class DifferenceOp final : public AxisOperator {
public:
    DifferenceOp(AxisOp a, AxisOp b) : a_(std::move(a)), b_(std::move(b)) {}
    double apply(const Fn1D& g, double x) const override { return a_->apply(g, x) - b_->apply(g, x); }
    std::string describe() const override { return "(" + a_->describe() + "-" + b_->describe() + ")"; }

private:
    AxisOp a_, b_;
};

class ComposeOp final : public AxisOperator {
public:
    ComposeOp(AxisOp outer, AxisOp inner) : outer_(std::move(outer)), inner_(std::move(inner)) {}
    double apply(const Fn1D& g, double x) const override
    {
        const Fn1D h = [&](double y) { return inner_->apply(g, y); };
        return outer_->apply(h, x);
    }
    std::string describe() const override { return outer_->describe() + "*" + inner_->describe(); }

private:
    AxisOp outer_, inner_;
};

}  // namespace

AxisOp identity_op()
{
    static const AxisOp op = std::make_shared<IdentityOp>();
    return op;
}

AxisOp projector_op(double corner, double edge, int l, QuadSpec quad)
{
    return std::make_shared<ProjectorOp>(corner, edge, l, quad);
}

AxisOp masked_op(double lo, double width, AxisOp inner)
{
    return std::make_shared<MaskedOp>(lo, width, std::move(inner));
}

AxisOp difference_op(AxisOp a, AxisOp b)
{
    return std::make_shared<DifferenceOp>(std::move(a), std::move(b));
}

AxisOp compose_op(AxisOp outer, AxisOp inner)
{
    return std::make_shared<ComposeOp>(std::move(outer), std::move(inner));
}

namespace {

double apply_rec(const std::vector<AxisOp>& ops, const FunctionOracle& f, const std::vector<std::size_t>& order,
                 std::size_t k, Point& x)
{
    if (k == order.size())
        return f(x);
    const std::size_t j = order[k];
    const double saved = x[j];
    const Fn1D slice = [&](double y) {
        const double keep = x[j];
        x[j] = y;
        const double v = apply_rec(ops, f, order, k + 1, x);
        x[j] = keep;
        return v;
    };
    const double v = ops[j]->apply(slice, saved);
    x[j] = saved;
    return v;
}

}  // namespace

FunctionOracle tensor_apply(const std::vector<AxisOp>& ops, const FunctionOracle& f, const Box& domain,
                            std::vector<std::size_t> order)
{
    const std::size_t d = f.dim;
    if (ops.size() != d || domain.dim() != d)
        throw std::invalid_argument("tensor_apply: need one operator per axis");
    if (order.empty())
        for (std::size_t j = 0; j < d; ++j)
            order.push_back(j);
    if (order.size() != d)
        throw std::invalid_argument("tensor_apply: order must list every axis once");
    std::vector<bool> seen(d, false);
    for (std::size_t j : order) {
        if (j >= d || seen[j])
            throw std::invalid_argument("tensor_apply: order must list every axis once");
        seen[j] = true;
    }
    FunctionOracle out;
    out.dim = d;
    out.name = "tensor_apply(" + f.name + ")";
    out.fn = [ops, f, domain, order](std::span<const double> x) {
        if (!domain.contains_closed(x))
            return 0.0;
        Point y(x.begin(), x.end());
        return apply_rec(ops, f, order, 0, y);
    };
    return out;
}

FunctionOracle masked_project(const FunctionOracle& f, const Box& proj_box, const Box& mask_box, const MultiIndex& l,
                              std::optional<QuadSpec> quad)
{
    TensorPoly p = project(f, proj_box, l, quad);
    FunctionOracle out;
    out.dim = f.dim;
    out.name = "masked_project(" + f.name + ")";
    out.fn = [p = std::move(p), mask_box](std::span<const double> x) {
        return mask_box.contains_half_open(x) ? p(x) : 0.0;
    };
    return out;
}

}  // namespace mixsmooth
