#include "lmlearn/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

namespace lmlearn {

namespace {

std::string child(const std::string &pointer, const std::string &key) {
    return pointer + "/" + key;
}

std::string child(const std::string &pointer, std::size_t index) {
    return pointer + "/" + std::to_string(index);
}

const Json &field(const Json &obj, const std::string &pointer, const std::string &key) {
    if (!obj.is_object())
        throw SchemaError(pointer.empty() ? "/" : pointer, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end())
        throw SchemaError(child(pointer, key), "missing field");
    return *it;
}

const Json &array_field(const Json &obj, const std::string &pointer, const std::string &key) {
    const Json &v = field(obj, pointer, key);
    if (!v.is_array())
        throw SchemaError(child(pointer, key), "expected an array");
    return v;
}

std::string string_field(const Json &obj, const std::string &pointer, const std::string &key) {
    const Json &v = field(obj, pointer, key);
    if (!v.is_string())
        throw SchemaError(child(pointer, key), "expected a string");
    return v.get<std::string>();
}

std::size_t index_value(const Json &v, const std::string &pointer, std::size_t bound) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
        throw SchemaError(pointer, "expected a non-negative integer");
    auto i = v.get<std::size_t>();
    if (i >= bound)
        throw SchemaError(pointer, "index " + std::to_string(i) + " out of range");
    return i;
}

std::size_t count_value(const Json &v, const std::string &pointer) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
        throw SchemaError(pointer, "expected a non-negative integer");
    return v.get<std::size_t>();
}

double prob_value(const Json &v, const std::string &pointer) {
    if (!v.is_number())
        throw SchemaError(pointer, "expected a number");
    double p = v.get<double>();
    if (!(p > 0.0 && p <= 1.0))
        throw SchemaError(pointer, "probability outside (0,1]");
    return p;
}

std::vector<Atom> vertices_from_json(const Json &j) {
    const Json &arr = array_field(j, "", "vertices");
    std::vector<Atom> out;
    for (std::size_t i = 0; i < arr.size(); ++i)
        out.push_back(atom_from_json(arr[i], child("/vertices", i)));
    return out;
}

template <typename Range>
std::map<Atom, std::size_t> index_of(const Range &atoms) {
    std::map<Atom, std::size_t> idx;
    for (const Atom &a : atoms)
        idx.emplace(a, idx.size());
    return idx;
}

std::string dot_escape(const std::string &s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\')
            out += '\\';
        out += c;
    }
    return out;
}

std::string format_mu(double mu) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", mu);
    return buf;
}

std::string dot_node(const Atom &a, std::size_t id) {
    std::string line = "  n" + std::to_string(id) + " [label=\"" + dot_escape(a.str()) + "\"";
    if (a.is_lifted())
        line += ", style=dashed";
    return line + "];\n";
}

Json prf_to_json(const Prf &p) {
    return Json{{"precision", p.precision}, {"recall", p.recall}, {"f1", p.f1},
                {"hits", p.hits},           {"misses", p.misses}, {"extras", p.extras}};
}

Json alpha_to_json(const AlphaPrf &p) {
    return Json{{"precision", p.precision}, {"recall", p.recall}, {"f1", p.f1}};
}

} // namespace

Json atom_to_json(const Atom &atom) {
    Json args = Json::array();
    for (const Term &t : atom.args)
        args.push_back(t.name);
    return Json{{"pred", atom.predicate}, {"args", args}};
}

Atom atom_from_json(const Json &j, const std::string &pointer) {
    Atom a;
    a.predicate = string_field(j, pointer, "pred");
    if (a.predicate.empty())
        throw SchemaError(child(pointer, "pred"), "empty predicate name");
    const Json &args = array_field(j, pointer, "args");
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (!args[i].is_string() || args[i].get<std::string>().empty())
            throw SchemaError(child(child(pointer, "args"), i), "expected a non-empty string");
        std::string name = args[i].get<std::string>();
        a.args.push_back(name[0] == '?' ? Term::variable(name) : Term::object(name));
    }
    return a;
}

Json lgg_to_json(const Lgg &lgg) {
    auto idx = index_of(lgg.vertices);
    Json vertices = Json::array();
    for (const Atom &v : lgg.vertices)
        vertices.push_back(atom_to_json(v));
    Json edges = Json::array();
    for (const Ordering &e : lgg.edges)
        edges.push_back(Json::array({idx.at(e.src), idx.at(e.dst)}));
    return Json{{"task", lgg.task},
                {"vertices", vertices},
                {"edges", edges},
                {"order_type", "greedy_necessary"}};
}

Lgg lgg_from_json(const Json &j) {
    Lgg lgg;
    lgg.task = string_field(j, "", "task");
    auto vertices = vertices_from_json(j);
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        if (!lgg.vertices.insert(vertices[i]).second)
            throw SchemaError(child("/vertices", i), "duplicate vertex " + vertices[i].str());
    }
    const Json &edges = array_field(j, "", "edges");
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const std::string ptr = child("/edges", i);
        if (!edges[i].is_array() || edges[i].size() != 2)
            throw SchemaError(ptr, "expected a [src, dst] pair");
        std::size_t s = index_value(edges[i][0], child(ptr, 0), vertices.size());
        std::size_t d = index_value(edges[i][1], child(ptr, 1), vertices.size());
        lgg.edges.insert({vertices[s], vertices[d]});
    }
    if (j.contains("order_type") && j["order_type"] != "greedy_necessary")
        throw SchemaError("/order_type", "unsupported ordering type");
    return lgg;
}

Json plog_to_json(const PLog &plog) {
    auto idx = index_of(plog.counts.vertices);
    Json vertices = Json::array();
    for (const Atom &v : plog.counts.vertices)
        vertices.push_back(atom_to_json(v));
    Json edges = Json::array();
    for (const auto &[e, n] : plog.counts.edge_counts)
        edges.push_back(Json{{"src", idx.at(e.src)}, {"dst", idx.at(e.dst)}, {"n", n}, {"mu", plog.mu(e)}});
    Json counts = Json::array();
    for (const auto &[v, n] : plog.counts.log_counts)
        counts.push_back(Json{{"vertex", idx.at(v)}, {"n_graph", n}});
    return Json{{"domain", plog.domain}, {"vertices", vertices}, {"edges", edges}, {"log_counts", counts}};
}

PLog plog_from_json(const Json &j) {
    WLog w;
    std::string domain = string_field(j, "", "domain");
    auto vertices = vertices_from_json(j);
    for (std::size_t i = 0; i < vertices.size(); ++i)
        if (!w.vertices.insert(vertices[i]).second)
            throw SchemaError(child("/vertices", i), "duplicate vertex " + vertices[i].str());

    const Json &counts = array_field(j, "", "log_counts");
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const std::string ptr = child("/log_counts", i);
        std::size_t v = index_value(field(counts[i], ptr, "vertex"), child(ptr, "vertex"), vertices.size());
        std::size_t n = count_value(field(counts[i], ptr, "n_graph"), child(ptr, "n_graph"));
        if (n == 0)
            throw SchemaError(child(ptr, "n_graph"), "n_graph must be positive");
        if (!w.log_counts.emplace(vertices[v], n).second)
            throw SchemaError(ptr, "duplicate entry for " + vertices[v].str());
    }

    const Json &edges = array_field(j, "", "edges");
    std::vector<double> stored;
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const std::string ptr = child("/edges", i);
        std::size_t s = index_value(field(edges[i], ptr, "src"), child(ptr, "src"), vertices.size());
        std::size_t d = index_value(field(edges[i], ptr, "dst"), child(ptr, "dst"), vertices.size());
        std::size_t n = count_value(field(edges[i], ptr, "n"), child(ptr, "n"));
        double mu = prob_value(field(edges[i], ptr, "mu"), child(ptr, "mu"));
        auto it = w.log_counts.find(vertices[d]);
        if (it == w.log_counts.end())
            throw SchemaError(child(ptr, "dst"), "no log_counts entry for " + vertices[d].str());
        if (n == 0 || n > it->second)
            throw SchemaError(child(ptr, "n"), "count exceeds n_graph of the destination");
        double expected = static_cast<double>(n) / static_cast<double>(it->second);
        if (std::fabs(expected - mu) > 1e-9)
            throw SchemaError(child(ptr, "mu"), "mu does not equal n / n_graph");
        if (!w.edge_counts.emplace(Ordering{vertices[s], vertices[d]}, n).second)
            throw SchemaError(ptr, "duplicate edge");
    }
    return finalize_plog(w, domain);
}

Json plgg_to_json(const PLgg &plgg) {
    const auto all = plgg.vertices();
    auto idx = index_of(all);
    Json vertices = Json::array();
    for (const Atom &v : all) {
        Json jv = atom_to_json(v);
        jv["grounded"] = v.is_ground();
        jv["seed"] = plgg.seeds.count(v) > 0;
        vertices.push_back(jv);
    }
    Json edges = Json::array();
    for (const auto &[e, mu] : plgg.orderings())
        edges.push_back(Json{{"src", idx.at(e.src)}, {"dst", idx.at(e.dst)}, {"mu", mu}});
    return Json{{"side", to_string(plgg.side)}, {"vertices", vertices}, {"edges", edges}};
}

PLgg plgg_from_json(const Json &j) {
    PLgg g;
    std::string side = string_field(j, "", "side");
    if (side == "goal")
        g.side = PlggSide::goal;
    else if (side == "init")
        g.side = PlggSide::init;
    else if (side == "combined")
        g.side = PlggSide::combined;
    else
        throw SchemaError("/side", "expected goal, init or combined");
    auto vertices = vertices_from_json(j);
    const Json &raw = array_field(j, "", "vertices");
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        g.add_node(vertices[i]);
        if (raw[i].contains("seed") && raw[i]["seed"].is_boolean() && raw[i]["seed"].get<bool>())
            g.seeds.insert(vertices[i]);
    }
    const Json &edges = array_field(j, "", "edges");
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const std::string ptr = child("/edges", i);
        std::size_t s = index_value(field(edges[i], ptr, "src"), child(ptr, "src"), vertices.size());
        std::size_t d = index_value(field(edges[i], ptr, "dst"), child(ptr, "dst"), vertices.size());
        double mu = prob_value(field(edges[i], ptr, "mu"), child(ptr, "mu"));
        if (g.side == PlggSide::init)
            g.add_neighbor(vertices[s], vertices[d], mu);
        else
            g.add_neighbor(vertices[d], vertices[s], mu);
    }
    return g;
}

Json report_to_json(const MetricReport &r) {
    return Json{{"landmarks", prf_to_json(r.landmarks)},
                {"orderings", prf_to_json(r.orderings)},
                {"alpha_v", r.alpha_v},
                {"alpha_e", r.alpha_e},
                {"alpha_landmarks", alpha_to_json(r.alpha_landmarks)},
                {"alpha_orderings", alpha_to_json(r.alpha_orderings)}};
}

std::string lgg_to_dot(const Lgg &lgg) {
    auto idx = index_of(lgg.vertices);
    std::string out = "digraph \"" + dot_escape(lgg.task) + "\" {\n  rankdir=LR;\n";
    for (const auto &[v, i] : idx)
        out += dot_node(v, i);
    for (const Ordering &e : lgg.edges)
        out += "  n" + std::to_string(idx.at(e.src)) + " -> n" + std::to_string(idx.at(e.dst)) + ";\n";
    return out + "}\n";
}

std::string plog_to_dot(const PLog &plog) {
    auto idx = index_of(plog.counts.vertices);
    std::string out = "digraph \"" + dot_escape(plog.domain) + "\" {\n  rankdir=LR;\n";
    for (const auto &[v, i] : idx)
        out += dot_node(v, i);
    for (const auto &[e, mu] : plog.probs)
        out += "  n" + std::to_string(idx.at(e.src)) + " -> n" + std::to_string(idx.at(e.dst)) +
               " [label=\"" + format_mu(mu) + "\"];\n";
    return out + "}\n";
}

std::string plgg_to_dot(const PLgg &plgg) {
    auto idx = index_of(plgg.vertices());
    std::string out = "digraph \"p-lgg-" + std::string(to_string(plgg.side)) + "\" {\n  rankdir=LR;\n";
    for (const auto &[v, i] : idx)
        out += dot_node(v, i);
    for (const auto &[e, mu] : plgg.orderings())
        out += "  n" + std::to_string(idx.at(e.src)) + " -> n" + std::to_string(idx.at(e.dst)) +
               " [label=\"" + format_mu(mu) + "\"];\n";
    return out + "}\n";
}

std::string read_text_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error(path.string() + ": cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error(path.string() + ": cannot write file");
    out << text;
    if (!out)
        throw std::runtime_error(path.string() + ": write failed");
}

Json read_json_file(const std::filesystem::path &path) {
    std::string text = read_text_file(path);
    try {
        return Json::parse(text);
    } catch (const Json::parse_error &e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
}

} // namespace lmlearn
