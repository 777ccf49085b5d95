#include "cxp/io.hpp"

#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace cxp {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(s);
    while (std::getline(ss, field, sep))
        out.push_back(field);
    if (!s.empty() && s.back() == sep)
        out.push_back("");
    return out;
}

bool next_data_line(std::istream& in, std::string& line) {
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty() || line[0] == '#')
            continue;
        return true;
    }
    return false;
}

std::vector<AccessPoint> parse_access_list(const std::string& s) {
    std::vector<AccessPoint> out;
    for (const std::string& part : split(s, ';')) {
        if (part.empty())
            continue;
        auto colon = part.find(':');
        if (colon == std::string::npos)
            throw ParseError("access list entry `" + part + "` missing `ixp:lat`");
        out.push_back(AccessPoint{static_cast<NodeId>(std::stoul(part.substr(0, colon))),
                                  std::stod(part.substr(colon + 1))});
    }
    if (out.empty())
        throw ParseError("empty access list");
    return out;
}

void format_access_list(std::ostream& os, std::span<const AccessPoint> list) {
    for (std::size_t i = 0; i < list.size(); ++i) {
        if (i)
            os << ';';
        os << list[i].ixp << ':' << list[i].latency_ms;
    }
}

} // namespace

void write_graph(const Multigraph& g, std::ostream& nodes_out, std::ostream& edges_out) {
    nodes_out << "# ixp_id,name,lat_deg,lon_deg\n";
    nodes_out << std::setprecision(17);
    for (const IxpNode& n : g.nodes()) {
        nodes_out << n.id << ',' << n.name << ',';
        if (n.location)
            nodes_out << n.location->lat_deg << ',' << n.location->lon_deg;
        else
            nodes_out << ',';
        nodes_out << '\n';
    }
    edges_out << "# edge_id,src,dst,provider_asn,bandwidth,latency_ms\n";
    edges_out << std::setprecision(17);
    for (const PathletEdge& e : g.edges()) {
        if (e.unbounded)
            continue;
        edges_out << e.id << ',' << e.src << ',' << e.dst << ',' << e.provider_asn << ','
                  << e.bandwidth << ',' << e.latency_ms << '\n';
    }
}

Multigraph read_graph(std::istream& nodes_in, std::istream& edges_in) {
    std::vector<IxpNode> nodes;
    std::string line;
    while (next_data_line(nodes_in, line)) {
        auto f = split(line, ',');
        if (f.size() != 4)
            throw ParseError("nodes.csv: expected `ixp_id,name,lat_deg,lon_deg`: " + line);
        IxpNode n;
        n.id = static_cast<NodeId>(std::stoul(f[0]));
        n.name = f[1];
        if (!f[2].empty() && !f[3].empty())
            n.location = GeoCoord{std::stod(f[2]), std::stod(f[3])};
        nodes.push_back(std::move(n));
    }
    std::vector<PathletEdge> edges;
    while (next_data_line(edges_in, line)) {
        auto f = split(line, ',');
        if (f.size() != 6)
            throw ParseError("edges.csv: expected 6 fields: " + line);
        PathletEdge e;
        e.id = static_cast<EdgeId>(std::stoul(f[0]));
        e.src = static_cast<NodeId>(std::stoul(f[1]));
        e.dst = static_cast<NodeId>(std::stoul(f[2]));
        e.provider_asn = static_cast<Asn>(std::stoul(f[3]));
        e.bandwidth = std::stod(f[4]);
        e.latency_ms = std::stod(f[5]);
        edges.push_back(e);
    }
    return Multigraph::build(std::move(nodes), std::move(edges));
}

void write_requests(std::ostream& out, std::span<const Request> requests) {
    out << "# request_id,src_access,dst_access,min_bandwidth,max_latency_ms\n";
    out << std::setprecision(17);
    for (const Request& r : requests) {
        out << r.id << ',';
        format_access_list(out, r.src_access);
        out << ',';
        format_access_list(out, r.dst_access);
        out << ',' << r.min_bandwidth << ',' << r.max_latency_ms << '\n';
    }
}

std::vector<Request> read_requests(std::istream& in) {
    std::vector<Request> out;
    std::string line;
    while (next_data_line(in, line)) {
        auto f = split(line, ',');
        if (f.size() != 5)
            throw ParseError("requests.csv: expected 5 fields: " + line);
        Request r;
        r.id = std::stoull(f[0]);
        r.src_access = parse_access_list(f[1]);
        r.dst_access = parse_access_list(f[2]);
        r.min_bandwidth = std::stod(f[3]);
        r.max_latency_ms = std::stod(f[4]);
        out.push_back(std::move(r));
    }
    return out;
}

void write_solution(std::ostream& out, std::span<const SolutionRow> rows) {
    out << "# request_id,accepted,edge_id_sequence\n";
    for (const SolutionRow& row : rows) {
        out << row.request_id << ',' << (row.accepted ? 1 : 0) << ',';
        for (std::size_t i = 0; i < row.edge_ids.size(); ++i) {
            if (i)
                out << ';';
            out << row.edge_ids[i];
        }
        out << '\n';
    }
}

Multigraph load_graph_dir(const std::filesystem::path& dir) {
    std::ifstream nodes(dir / "nodes.csv");
    std::ifstream edges(dir / "edges.csv");
    if (!nodes || !edges)
        throw ParseError("cannot open nodes.csv/edges.csv under " + dir.string());
    return read_graph(nodes, edges);
}

void save_graph_dir(const Multigraph& g, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::ofstream nodes(dir / "nodes.csv");
    std::ofstream edges(dir / "edges.csv");
    if (!nodes || !edges)
        throw ParseError("cannot write nodes.csv/edges.csv under " + dir.string());
    write_graph(g, nodes, edges);
}

} // namespace cxp
