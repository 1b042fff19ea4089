#include "sparsezono/io.hpp"

#include <stdexcept>

namespace sparsezono
{

using nlohmann::json;

json to_json(const SparseMat& m)
{
    json out = json::array();
    for (const Triplet& t : m.to_triplets())
        out.push_back({t.row, t.col, t.value});
    return out;
}

json to_json(const Vector& v)
{
    json out = json::array();
    for (Index i = 0; i < v.size(); ++i)
        out.push_back(v[i]);
    return out;
}

json to_json(const ConZono& Z)
{
    return {{"n", Z.n()},           {"nG", Z.nG()},       {"nC", Z.nC()}, {"G", to_json(Z.G())},
            {"c", to_json(Z.c())}, {"A", to_json(Z.A())}, {"b", to_json(Z.b())}};
}

json to_json(const IntervalBox& box)
{
    json out = json::array();
    for (const Interval& iv : box.intervals())
        out.push_back({iv.lo(), iv.hi()});
    return out;
}

json to_json(const AdmmResult& r)
{
    json hist = json::array();
    for (const ResidualRecord& h : r.history)
        hist.push_back({h.primal, h.dual});
    json out = {{"status", to_string(r.status)},
                {"x_star", to_json(r.x_star)},
                {"iterations", r.iterations},
                {"objective", r.objective},
                {"residuals", hist}};
    out["certificate"] = r.certificate ? to_json(*r.certificate) : json(nullptr);
    return out;
}

SparseMat sparse_from_json(const json& j, Index rows, Index cols)
{
    if (!j.is_array())
        throw std::invalid_argument("sparse matrix JSON must be an array of triplets");
    std::vector<Triplet> t;
    t.reserve(j.size());
    for (const json& e : j)
    {
        if (!e.is_array() || e.size() != 3)
            throw std::invalid_argument("sparse matrix JSON entries must be [row, col, value]");
        const Index r = e[0].get<Index>();
        const Index c = e[1].get<Index>();
        if (r < 0 || r >= rows || c < 0 || c >= cols)
            throw std::invalid_argument("sparse matrix JSON entry (" + std::to_string(r) + ", " +
                                        std::to_string(c) + ") outside " + std::to_string(rows) +
                                        "x" + std::to_string(cols));
        t.push_back({r, c, e[2].get<double>()});
    }
    return SparseMat::from_triplets(rows, cols, std::move(t));
}

Vector vector_from_json(const json& j)
{
    if (!j.is_array())
        throw std::invalid_argument("vector JSON must be an array of numbers");
    Vector v(static_cast<Index>(j.size()));
    for (size_t i = 0; i < j.size(); ++i)
        v[static_cast<Index>(i)] = j[i].get<double>();
    return v;
}

ConZono conzono_from_json(const json& j)
{
    for (const char* key : {"n", "nG", "nC", "G", "c", "A", "b"})
        if (!j.contains(key))
            throw std::invalid_argument(std::string("ConZono JSON is missing key '") + key + "'");
    const Index n = j.at("n").get<Index>();
    const Index ng = j.at("nG").get<Index>();
    const Index nc = j.at("nC").get<Index>();
    Vector c = vector_from_json(j.at("c"));
    Vector b = vector_from_json(j.at("b"));
    if (c.size() != n || b.size() != nc)
        throw std::invalid_argument("ConZono JSON: vector lengths disagree with n / nC");
    return ConZono(sparse_from_json(j.at("G"), n, ng), std::move(c),
                   sparse_from_json(j.at("A"), nc, ng), std::move(b));
}

}  // namespace sparsezono
