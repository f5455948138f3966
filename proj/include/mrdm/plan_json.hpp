#pragma once

// JSON forms of RatePlan and AllocationTree.
//
// Plan:  {"N":64,"J":3,"R_bps":64000,"B":8,"channels":[{"id":"a","rate_bps":256000}, ...]}
//        (a channel may also carry "f_m_hz")
// Tree:  nested nodes, root at level 0:
//        {"level":0,"kind":"split",
//         "band":{"level":1,"slots":[{"channel":"a","decimation":1,"phase":0}]},
//         "child":{"level":1,"kind":"leaf","channel":"b"}}

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "mrdm/error.hpp"
#include "mrdm/rate_plan.hpp"

namespace mrdm {

using json = nlohmann::json;

inline json plan_to_json(const RatePlan& plan) {
    json channels = json::array();
    for (const auto& ch : plan.channels) {
        json c = {{"id", ch.id}, {"rate_bps", ch.rate_bps}};
        if (ch.f_m_hz) c["f_m_hz"] = *ch.f_m_hz;
        channels.push_back(std::move(c));
    }
    return {{"N", plan.N}, {"J", plan.J}, {"R_bps", plan.R_bps}, {"B", plan.B}, {"channels", std::move(channels)}};
}

inline RatePlan plan_from_json(const json& j) {
    try {
        RatePlan plan;
        plan.N = j.at("N").get<std::uint64_t>();
        plan.J = j.at("J").get<std::size_t>();
        plan.R_bps = j.at("R_bps").get<std::uint64_t>();
        plan.B = j.at("B").get<unsigned>();
        for (const auto& c : j.at("channels")) {
            Channel ch;
            ch.id = c.at("id").get<std::string>();
            ch.rate_bps = c.at("rate_bps").get<std::uint64_t>();
            if (c.contains("f_m_hz")) ch.f_m_hz = c.at("f_m_hz").get<double>();
            plan.channels.push_back(std::move(ch));
        }
        return plan;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("plan JSON: ") + e.what());
    }
}

inline RatePlan parse_plan(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("plan JSON: ") + e.what());
    }
    return plan_from_json(j);
}

inline RatePlan load_plan(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open plan file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_plan(ss.str());
}

inline json tree_to_json(const AllocationTree& tree) {
    json node = {{"level", tree.depth()}, {"kind", "leaf"}, {"channel", tree.leaf}};
    for (std::size_t b = tree.depth(); b-- > 0;) {
        const auto& band = tree.bands[b];
        json slots = json::array();
        for (const auto& s : band.slots) {
            slots.push_back({{"channel", s.channel}, {"decimation", s.decimation}, {"phase", s.phase}});
        }
        node = {{"level", b},
                {"kind", "split"},
                {"band", {{"level", band.level}, {"slots", std::move(slots)}}},
                {"child", std::move(node)}};
    }
    return {{"J", tree.J}, {"root", std::move(node)}};
}

inline AllocationTree tree_from_json(const json& j) {
    try {
        AllocationTree tree;
        tree.J = j.at("J").get<std::size_t>();
        const json* node = &j.at("root");
        for (std::size_t level = 0;; ++level) {
            if (node->at("level").get<std::size_t>() != level) {
                throw Error(ErrorCode::ParseError, "tree node level out of sequence");
            }
            const auto kind = node->at("kind").get<std::string>();
            if (kind == "leaf") {
                tree.leaf = node->at("channel").get<std::string>();
                break;
            }
            if (kind != "split") throw Error(ErrorCode::ParseError, "unknown node kind '" + kind + "'");
            DetailBand band;
            band.level = node->at("band").at("level").get<std::size_t>();
            for (const auto& s : node->at("band").at("slots")) {
                band.slots.push_back({s.at("channel").get<std::string>(), s.at("decimation").get<std::uint64_t>(),
                                      s.at("phase").get<std::uint64_t>()});
            }
            tree.bands.push_back(std::move(band));
            node = &node->at("child");
        }
        return tree;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("tree JSON: ") + e.what());
    }
}

} // namespace mrdm
