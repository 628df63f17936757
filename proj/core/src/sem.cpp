#include "mdag/sem.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "mdag/error.hpp"
#include "mdag/projection.hpp"

namespace mdag {

namespace {

constexpr double kRowTol = 1e-12;

// Uniform double in (0,1) from the top 53 bits; mt19937_64 output is pinned
// by the standard, so this is reproducible everywhere.
double next_unit(std::mt19937_64& rng) {
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

double next_exponential(std::mt19937_64& rng) {
    return -std::log(next_unit(rng));
}

}  // namespace

DiscreteSem::DiscreteSem(Dag dag, std::map<std::string, int> cardinalities,
                         std::map<std::string, std::vector<std::vector<double>>> kernels)
    : dag_(std::move(dag)) {
    cards_.resize(dag_.size());
    kernels_.resize(dag_.size());
    for (int v = 0; v < dag_.size(); ++v) {
        auto cit = cardinalities.find(dag_.name(v));
        if (cit == cardinalities.end()) throw_input("missing cardinality for '" + dag_.name(v) + "'");
        if (cit->second < 1) throw_input("cardinalities must be positive");
        cards_[v] = cit->second;
    }
    for (int v = 0; v < dag_.size(); ++v) {
        auto kit = kernels.find(dag_.name(v));
        if (kit == kernels.end()) throw_input("missing kernel for '" + dag_.name(v) + "'");
        kernels_[v] = kit->second;
        if (kernels_[v].size() != row_count(v))
            throw_input("kernel row count mismatch for '" + dag_.name(v) + "'");
        for (const auto& row : kernels_[v]) {
            if (row.size() != static_cast<std::size_t>(cards_[v]))
                throw_input("kernel row width mismatch for '" + dag_.name(v) + "'");
            double sum = 0;
            for (double p : row) {
                if (p < -kRowTol) throw_input("negative kernel entry for '" + dag_.name(v) + "'");
                sum += p;
            }
            if (std::abs(sum - 1.0) > kRowTol)
                throw_input("kernel row of '" + dag_.name(v) + "' does not sum to one");
        }
    }
}

std::size_t DiscreteSem::row_count(int v) const {
    std::size_t rows = 1;
    for (int p : bits_of(dag_.parents(v))) rows *= static_cast<std::size_t>(cards_[p]);
    return rows;
}

DiscreteSem random_sem(const Dag& dag, const std::map<std::string, int>& cards, std::uint64_t seed) {
    for (const auto& [name, c] : cards)
        if (c < 1) throw_input("cardinalities must be positive");
    std::mt19937_64 rng(seed);
    std::map<std::string, std::vector<std::vector<double>>> kernels;
    std::map<std::string, int> card_map = cards;
    // Fixed iteration order (sorted vertex names) keeps the stream stable.
    for (int v = 0; v < dag.size(); ++v) {
        auto cit = card_map.find(dag.name(v));
        if (cit == card_map.end()) throw_input("missing cardinality for '" + dag.name(v) + "'");
        std::size_t rows = 1;
        for (int p : bits_of(dag.parents(v))) {
            auto pit = card_map.find(dag.name(p));
            rows *= static_cast<std::size_t>(pit->second);
        }
        std::vector<std::vector<double>> table(rows, std::vector<double>(cit->second));
        for (auto& row : table) {
            double sum = 0;
            for (auto& x : row) {
                x = next_exponential(rng);
                sum += x;
            }
            for (auto& x : row) x /= sum;
        }
        kernels[dag.name(v)] = std::move(table);
    }
    return DiscreteSem(dag, card_map, std::move(kernels));
}

JointTable exact_joint_all(const DiscreteSem& sem, std::size_t max_cells) {
    const Dag& d = sem.dag();
    std::vector<std::string> vars = d.vertex_names();
    std::vector<int> cards(d.size());
    std::size_t cells = 1;
    for (int v = 0; v < d.size(); ++v) {
        cards[v] = sem.card(v);
        if (cells > max_cells / static_cast<std::size_t>(cards[v]))
            throw_resource("product state space exceeds the configured cap");
        cells *= static_cast<std::size_t>(cards[v]);
    }
    JointTable out = JointTable::constant(vars, cards, 0.0);
    std::vector<int> st(d.size());
    for (std::size_t cell = 0; cell < cells; ++cell) {
        st = out.assignment(cell);
        double p = 1.0;
        for (int v = 0; v < d.size() && p != 0.0; ++v) {
            std::size_t row = 0;
            for (int pa : bits_of(d.parents(v))) row = row * sem.card(pa) + st[pa];
            p *= sem.kernel(v)[row][st[v]];
        }
        out.values()[cell] = p;
    }
    return out;
}

JointTable exact_joint(const DiscreteSem& sem, std::span<const std::string> observed,
                       std::size_t max_cells) {
    for (const auto& v : observed) sem.dag().index_of(v);
    JointTable full = exact_joint_all(sem, max_cells);
    std::vector<std::string> latent;
    for (const auto& v : sem.dag().vertex_names())
        if (std::find(observed.begin(), observed.end(), v) == observed.end()) latent.push_back(v);
    // Latents are summed in sorted order, one at a time; the reduction order
    // is therefore fixed regardless of how the call is parallelized.
    JointTable out = full;
    for (const auto& u : latent) out = out.marginalize({u});
    return out;
}

double ci_gap(const JointTable& t, const CiStatement& s) {
    s.validate();
    std::vector<std::string> abc = s.a;
    abc.insert(abc.end(), s.b.begin(), s.b.end());
    abc.insert(abc.end(), s.c.begin(), s.c.end());
    JointTable p_abc = t.margin_keeping(abc);

    std::vector<std::string> ac = s.a;
    ac.insert(ac.end(), s.c.begin(), s.c.end());
    std::vector<std::string> bc = s.b;
    bc.insert(bc.end(), s.c.begin(), s.c.end());
    JointTable p_ac = p_abc.margin_keeping(ac);
    JointTable p_bc = p_abc.margin_keeping(bc);
    JointTable p_c = p_abc.margin_keeping(s.c);

    double gap = 0;
    for (std::size_t cell = 0; cell < p_abc.cell_count(); ++cell) {
        std::vector<int> st = p_abc.assignment(cell);
        auto project = [&](const JointTable& sub) {
            std::vector<int> sst(sub.variables().size());
            for (std::size_t i = 0; i < sub.variables().size(); ++i)
                sst[i] = st[p_abc.index_of(sub.variables()[i])];
            return sub.values()[sub.offset(sst)];
        };
        double pc = s.c.empty() ? 1.0 : project(p_c);
        if (pc <= 0) continue;
        double joint = p_abc.values()[cell] / pc;
        double prod = (project(p_ac) / pc) * (project(p_bc) / pc);
        gap = std::max(gap, std::abs(joint - prod));
    }
    return gap;
}

double verma_gap(const JointTable& t) {
    if (t.variables().size() != 4) throw_input("the reweighting check needs exactly four variables");
    if (!t.strictly_positive())
        throw_degenerate("the reweighting functional needs a strictly positive table");
    const std::string x1 = t.variables()[0], x2 = t.variables()[1], x3 = t.variables()[2],
                      x4 = t.variables()[3];
    JointTable p12 = t.margin_keeping({x1, x2});
    JointTable p1 = t.margin_keeping({x1});
    JointTable p123 = t.margin_keeping({x1, x2, x3});

    int c1 = t.card(0), c2 = t.card(1), c3 = t.card(2), c4 = t.card(3);
    // q[x1][x3][x4] = sum_x2 p(x2|x1) p(x4|x1,x2,x3)
    std::vector<double> q(static_cast<std::size_t>(c1) * c3 * c4, 0.0);
    for (int s1 = 0; s1 < c1; ++s1) {
        double m1 = p1.values()[p1.offset({s1})];
        for (int s2 = 0; s2 < c2; ++s2) {
            double cond2 = p12.values()[p12.offset({s1, s2})] / m1;
            for (int s3 = 0; s3 < c3; ++s3) {
                double m123 = p123.values()[p123.offset({s1, s2, s3})];
                for (int s4 = 0; s4 < c4; ++s4) {
                    double cond4 = t.values()[t.offset({s1, s2, s3, s4})] / m123;
                    q[(static_cast<std::size_t>(s1) * c3 + s3) * c4 + s4] += cond2 * cond4;
                }
            }
        }
    }
    double gap = 0;
    for (int s3 = 0; s3 < c3; ++s3)
        for (int s4 = 0; s4 < c4; ++s4) {
            double lo = q[static_cast<std::size_t>(s3) * c4 + s4];
            double hi = lo;
            for (int s1 = 1; s1 < c1; ++s1) {
                double v = q[(static_cast<std::size_t>(s1) * c3 + s3) * c4 + s4];
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            gap = std::max(gap, hi - lo);
        }
    return gap;
}

double constraint_gap(const JointTable& t, const ConstraintDescriptor& c) {
    if (c.invariant_to.empty()) return 0.0;
    JointTable current = t;
    constexpr double kEps = 1e-300;
    for (const auto& step : c.steps) {
        if (step.kind == KernelOp::Kind::Marginalize) {
            current = current.marginalize(step.summed);
            continue;
        }
        // District factor: product over the district of kernel conditionals
        // q(x_v | x_{random vars before v}, x_conditioning).
        JointTable result;
        bool first = true;
        for (std::size_t i = 0; i < step.random_order.size(); ++i) {
            const std::string& v = step.random_order[i];
            if (std::find(step.district.begin(), step.district.end(), v) == step.district.end())
                continue;
            std::vector<std::string> keep_num = step.conditioning;
            for (std::size_t j = 0; j <= i; ++j) keep_num.push_back(step.random_order[j]);
            std::vector<std::string> keep_den = keep_num;
            keep_den.pop_back();  // drop v itself
            JointTable num = current.margin_keeping(keep_num);
            JointTable cond = num.divide(num.margin_keeping(keep_den), kEps);
            result = first ? cond : result.multiply(cond);
            if (first) first = false;
        }
        current = result;
    }
    return current.invariance_gap(c.invariant_to);
}

namespace {

// Search state: one CPT per canonical-DAG vertex, observed vertices with
// `observed_card` states and latents with `latent_card`.
struct SearchModel {
    Dag dag;
    std::vector<int> cards;
    std::vector<std::vector<std::vector<double>>> cpts;
    std::vector<int> observed;  // dense indices

    DiscreteSem to_sem() const {
        std::map<std::string, int> card_map;
        std::map<std::string, std::vector<std::vector<double>>> kernels;
        for (int v = 0; v < dag.size(); ++v) {
            card_map[dag.name(v)] = cards[v];
            kernels[dag.name(v)] = cpts[v];
        }
        return DiscreteSem(dag, card_map, kernels);
    }
};

struct Objective {
    double agreement = 0.0;
    double margin_penalty = 0.0;
    double score() const { return agreement - 10.0 * margin_penalty; }
};

Objective evaluate(const SearchModel& m) {
    DiscreteSem sem = m.to_sem();
    std::vector<std::string> observed_names;
    for (int v : m.observed) observed_names.push_back(m.dag.name(v));
    JointTable joint = exact_joint(sem, observed_names);

    Objective obj;
    int card = 0;
    for (std::size_t i = 0; i < joint.variables().size(); ++i) card = joint.card(static_cast<int>(i));
    for (int s = 0; s < card; ++s) {
        std::vector<int> st(joint.variables().size(), s);
        obj.agreement += joint.values()[joint.offset(st)];
    }
    for (std::size_t i = 0; i < joint.variables().size(); ++i) {
        JointTable margin = joint.margin_keeping({joint.variables()[i]});
        for (double p : margin.values())
            obj.margin_penalty = std::max(obj.margin_penalty, std::abs(p - 1.0 / card));
    }
    return obj;
}

}  // namespace

AgreementSearchResult max_agreement_search(const MDag& g, int observed_card, int latent_card,
                                           std::uint64_t budget, std::uint64_t seed) {
    if (budget == 0) throw_input("search budget must be positive");
    if (observed_card < 2 || latent_card < 1) throw_input("cardinalities must allow agreement");
    if (g.size() > 6) throw_resource("the agreement search targets small graphs");

    LabelledCanonicalDag canon = canonical_dag(g);
    SearchModel model;
    model.dag = canon.dag;
    model.cards.resize(model.dag.size());
    for (int v = 0; v < model.dag.size(); ++v) {
        bool latent = canon.facet_labels.count(model.dag.name(v)) > 0;
        model.cards[v] = latent ? latent_card : observed_card;
        if (!latent) model.observed.push_back(v);
    }

    std::mt19937_64 rng(seed);
    auto fresh_cpts = [&](int kind) {
        // kind 0: copy the first parent (latents uniform); kind >= 1: random.
        std::vector<std::vector<std::vector<double>>> cpts(model.dag.size());
        for (int v = 0; v < model.dag.size(); ++v) {
            std::vector<int> parents = bits_of(model.dag.parents(v));
            std::size_t rows = 1;
            for (int p : parents) rows *= static_cast<std::size_t>(model.cards[p]);
            cpts[v].assign(rows, std::vector<double>(model.cards[v], 0.0));
            for (std::size_t r = 0; r < rows; ++r) {
                auto& row = cpts[v][r];
                if (kind == 0) {
                    if (parents.empty()) {
                        for (auto& x : row) x = 1.0 / model.cards[v];
                    } else {
                        // Decode the first parent's state from the row index.
                        std::size_t rest = r;
                        std::vector<int> pstate(parents.size());
                        for (std::size_t k = parents.size(); k-- > 0;) {
                            pstate[k] = static_cast<int>(rest % model.cards[parents[k]]);
                            rest /= model.cards[parents[k]];
                        }
                        row[pstate[0] % model.cards[v]] = 1.0;
                    }
                } else {
                    double sum = 0;
                    for (auto& x : row) {
                        x = next_exponential(rng);
                        sum += x;
                    }
                    for (auto& x : row) x /= sum;
                }
            }
        }
        return cpts;
    };

    AgreementSearchResult result;
    auto consider = [&](const Objective& obj) {
        if (obj.margin_penalty <= 1e-9 && obj.agreement > result.best_agreement) {
            result.best_agreement = obj.agreement;
            result.best_margin_penalty = obj.margin_penalty;
        }
    };

    std::uint64_t used = 0;
    int restart = 0;
    while (used < budget) {
        model.cpts = fresh_cpts(restart);
        ++restart;
        Objective best = evaluate(model);
        ++used;
        consider(best);

        // Greedy coordinate perturbations with a shrinking step.
        double step = 0.5;
        while (used < budget) {
            int v = static_cast<int>(rng() % model.dag.size());
            std::size_t rows = model.cpts[v].size();
            std::size_t r = rng() % rows;
            int s = static_cast<int>(rng() % model.cards[v]);

            std::vector<double> saved = model.cpts[v][r];
            auto& row = model.cpts[v][r];
            for (auto& x : row) x *= (1.0 - step);
            row[s] += step;

            Objective cand = evaluate(model);
            ++used;
            consider(cand);
            if (cand.score() > best.score()) {
                best = cand;
            } else {
                model.cpts[v][r] = saved;
                step *= 0.97;
                if (step < 1e-4) break;  // restart
            }
        }
    }
    result.evaluations = used;
    return result;
}

}  // namespace mdag
