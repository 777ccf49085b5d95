#pragma once

#include "cxp/multigraph.hpp"
#include "cxp/types.hpp"

#include <filesystem>
#include <iosfwd>
#include <vector>

namespace cxp {

// Graph interchange files.
//   nodes.csv:    ixp_id,name,lat_deg,lon_deg   (lat/lon may be empty)
//   edges.csv:    edge_id,src,dst,provider_asn,bandwidth,latency_ms
//   requests.csv: request_id,src_access,dst_access,min_bandwidth,max_latency_ms
//                 with access lists encoded `ixp:lat[;ixp:lat...]`
//   solution.csv: request_id,accepted,edge_id_sequence (sequence `;`-joined)

void write_graph(const Multigraph& g, std::ostream& nodes_out, std::ostream& edges_out);
Multigraph read_graph(std::istream& nodes_in, std::istream& edges_in);

void write_requests(std::ostream& out, std::span<const Request> requests);
std::vector<Request> read_requests(std::istream& in);

struct SolutionRow {
    RequestId request_id = 0;
    bool accepted = false;
    std::vector<EdgeId> edge_ids;
};

void write_solution(std::ostream& out, std::span<const SolutionRow> rows);

// Filesystem conveniences used by the CLI.
Multigraph load_graph_dir(const std::filesystem::path& dir);
void save_graph_dir(const Multigraph& g, const std::filesystem::path& dir);

} // namespace cxp
