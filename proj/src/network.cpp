#include "factornet/network.hpp"

#include <cstdio>
#include <queue>

#include "factornet/error.hpp"
#include "factornet/report.hpp"

namespace factornet {

std::string to_string(NetworkKind k) { return k == NetworkKind::Causal ? "causal" : "correlation"; }

NetworkKind parse_network_kind(const std::string& s) {
    if (s == "causal") return NetworkKind::Causal;
    if (s == "correlation") return NetworkKind::Correlation;
    throw InputError("unknown network kind '" + s + "'");
}

std::string NetworkNode::label(const std::vector<std::string>& names) const {
    const std::string& base = names.at(static_cast<std::size_t>(factor));
    return lag == 0 ? base + "@t" : base + "@t-" + std::to_string(lag);
}

std::vector<NetworkNode> FactorNetwork::nodes() const {
    std::vector<NetworkNode> out;
    for (int l = lags; l >= 0; --l) {
        for (std::size_t i = 0; i < names.size(); ++i) out.push_back({static_cast<int>(i), l});
    }
    return out;
}

std::vector<Edge> FactorNetwork::significant_edges() const {
    std::vector<Edge> out;
    for (const auto& e : edges) {
        if (e.significant) out.push_back(e);
    }
    return out;
}

nlohmann::json to_json(const FactorNetwork& net) {
    nlohmann::json j;
    if (net.window) {
        j["window"] = {{"index", net.window->index},
                       {"start", format_date(net.window->start)},
                       {"end", format_date(net.window->end)},
                       {"length_months", net.window->length_months},
                       {"step_months", net.window->step_months}};
    } else {
        j["window"] = nullptr;
    }
    j["kind"] = to_string(net.kind);
    j["alpha"] = net.alpha;
    j["lags"] = net.lags;
    j["factors"] = net.names;
    j["order"] = net.order;
    auto nodes = nlohmann::json::array();
    for (const auto& n : net.nodes()) {
        nodes.push_back({{"id", n.label(net.names)}, {"factor", net.names[static_cast<std::size_t>(n.factor)]},
                         {"lag", n.lag}});
    }
    j["nodes"] = std::move(nodes);
    auto edges = nlohmann::json::array();
    for (const auto& e : net.edges) {
        edges.push_back({{"src", net.names[static_cast<std::size_t>(e.src)]},
                         {"dst", net.names[static_cast<std::size_t>(e.dst)]},
                         {"lag", e.lag},
                         {"weight", e.weight},
                         {"significant", e.significant},
                         {"lower", e.lower},
                         {"upper", e.upper}});
    }
    j["edges"] = std::move(edges);
    return j;
}

FactorNetwork network_from_json(const nlohmann::json& j) {
    try {
        FactorNetwork net;
        if (!j.at("window").is_null()) {
            const auto& w = j.at("window");
            auto start = parse_date(w.at("start").get<std::string>());
            auto end = parse_date(w.at("end").get<std::string>());
            if (!start || !end) throw InputError("network JSON: bad window dates");
            net.window = WindowSpec{w.at("index").get<int>(), *start, *end, w.value("length_months", 18),
                                    w.value("step_months", 3)};
        }
        net.kind = parse_network_kind(j.at("kind").get<std::string>());
        net.alpha = j.at("alpha").get<double>();
        net.lags = j.at("lags").get<int>();
        net.names = j.at("factors").get<std::vector<std::string>>();
        net.order = j.value("order", std::vector<int>{});
        auto index = [&](const std::string& name) {
            for (std::size_t i = 0; i < net.names.size(); ++i) {
                if (net.names[i] == name) return static_cast<int>(i);
            }
            throw InputError("network JSON: unknown factor '" + name + "'");
        };
        for (const auto& e : j.at("edges")) {
            Edge edge;
            edge.src = index(e.at("src").get<std::string>());
            edge.dst = index(e.at("dst").get<std::string>());
            edge.lag = e.at("lag").get<int>();
            edge.weight = e.at("weight").get<double>();
            edge.significant = e.at("significant").get<bool>();
            edge.lower = e.value("lower", edge.weight);
            edge.upper = e.value("upper", edge.weight);
            net.edges.push_back(edge);
        }
        return net;
    } catch (const nlohmann::json::exception& ex) {
        throw InputError(std::string("network JSON: ") + ex.what());
    }
}

std::string edge_csv_header() { return "window,start,end,kind,src,dst,lag,weight,significant,lower,upper\n"; }

std::string edge_csv_rows(const FactorNetwork& net) {
    std::string out;
    const std::string win = net.window ? std::to_string(net.window->index) : "";
    const std::string start = net.window ? format_date(net.window->start) : "";
    const std::string end = net.window ? format_date(net.window->end) : "";
    for (const auto& e : net.edges) {
        out += win + "," + start + "," + end + "," + to_string(net.kind) + "," +
               net.names[static_cast<std::size_t>(e.src)] + "," + net.names[static_cast<std::size_t>(e.dst)] + "," +
               std::to_string(e.lag) + "," + format_number(e.weight) + "," + (e.significant ? "1" : "0") + "," +
               format_number(e.lower) + "," + format_number(e.upper) + "\n";
    }
    return out;
}

bool instantaneous_subgraph_acyclic(const FactorNetwork& net) {
    const std::size_t n = net.names.size();
    std::vector<std::vector<int>> out(n);
    std::vector<int> indegree(n, 0);
    for (const auto& e : net.edges) {
        if (!e.significant || e.lag != 0) continue;
        if (e.src == e.dst) return false;
        out[static_cast<std::size_t>(e.src)].push_back(e.dst);
        ++indegree[static_cast<std::size_t>(e.dst)];
    }
    std::queue<int> ready;
    for (std::size_t i = 0; i < n; ++i) {
        if (indegree[i] == 0) ready.push(static_cast<int>(i));
    }
    std::size_t visited = 0;
    while (!ready.empty()) {
        const int v = ready.front();
        ready.pop();
        ++visited;
        for (int w : out[static_cast<std::size_t>(v)]) {
            if (--indegree[static_cast<std::size_t>(w)] == 0) ready.push(w);
        }
    }
    return visited == n;
}

}  // namespace factornet
