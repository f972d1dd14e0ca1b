// Copyright 2026 The raindrop authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "raindrop/detector.hpp"
#include "raindrop/geometry.hpp"
#include "raindrop/image.hpp"
#include "raindrop/image_io.hpp"

// Dataset ingestion: polygon annotation JSON, mask rasterization, keyframe
// label propagation, and sequence loading.
//
// Annotation files follow a LabelMe-style schema, one file per keyframe:
//   { "image": "<filename>",
//     "shapes": [ { "label": "raindrop", "points": [[x,y],...] }, ... ] }
// Sequence manifests:
//   { "sequence_id": str, "has_drops": bool, "frames": [paths...],
//     "keyframes": { "<frame_index>": "<annotation file>" } }

namespace raindrop {

struct PolygonAnnotation {
    std::string label;
    std::vector<PointF> points;  // >= 3 vertices, in order
};

struct SequenceManifest {
    std::string sequence_id;
    bool has_drops = false;
    std::vector<std::string> frame_paths;
    std::map<int, std::vector<PolygonAnnotation>> keyframe_annotations;
};

/// Parse one annotation document. Coordinates are preserved exactly.
inline std::vector<PolygonAnnotation> parse_annotations(const std::string& document) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(document);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("annotation JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("shapes") || !doc["shapes"].is_array()) {
        throw ParseError("annotation JSON: missing 'shapes' array");
    }
    std::vector<PolygonAnnotation> result;
    std::size_t index = 0;
    for (const auto& shape : doc["shapes"]) {
        if (!shape.is_object()) {
            throw ParseError("annotation shape #" + std::to_string(index) + ": not an object");
        }
        PolygonAnnotation ann;
        ann.label = shape.value("label", "");
        if (!shape.contains("points") || !shape["points"].is_array()) {
            throw ParseError("annotation shape #" + std::to_string(index) + ": missing points");
        }
        for (const auto& pt : shape["points"]) {
            if (!pt.is_array() || pt.size() != 2 || !pt[0].is_number() || !pt[1].is_number()) {
                throw ParseError("annotation shape #" + std::to_string(index) +
                                 ": point must be [x,y]");
            }
            const double x = pt[0].get<double>();
            const double y = pt[1].get<double>();
            if (!std::isfinite(x) || !std::isfinite(y)) {
                throw ParseError("annotation shape #" + std::to_string(index) +
                                 ": non-finite vertex");
            }
            ann.points.push_back({x, y});
        }
        if (ann.points.size() < 3) {
            throw ParseError("annotation shape #" + std::to_string(index) + " ('" + ann.label +
                             "'): polygon needs at least 3 points, got " +
                             std::to_string(ann.points.size()));
        }
        result.push_back(std::move(ann));
        ++index;
    }
    return result;
}

/// Inverse of parse_annotations; doubles round-trip exactly.
inline std::string serialize_annotations(const std::vector<PolygonAnnotation>& annotations,
                                         const std::string& image_name = "") {
    nlohmann::json doc;
    doc["image"] = image_name;
    doc["shapes"] = nlohmann::json::array();
    for (const auto& ann : annotations) {
        nlohmann::json shape;
        shape["label"] = ann.label;
        shape["points"] = nlohmann::json::array();
        for (const PointF& p : ann.points) {
            shape["points"].push_back({p.x, p.y});
        }
        doc["shapes"].push_back(std::move(shape));
    }
    return doc.dump(2);
}

/// Union of all polygons, even-odd rule, pixel-center sampling. Vertices
/// outside the raster are fine; only the in-bounds part is filled.
inline BinaryMask rasterize(const std::vector<PolygonAnnotation>& polygons, int width,
                            int height) {
    if (width <= 0 || height <= 0) {
        throw ParameterError("rasterize: dimensions must be positive");
    }
    BinaryMask mask(width, height);
    for (const auto& poly : polygons) {
        fill_polygon_evenodd(poly.points, mask);
    }
    return mask;
}

/// One mask per frame: the rasterized nearest preceding keyframe, or an
/// empty mask for frames before the first keyframe.
inline std::vector<BinaryMask> propagate_labels(const SequenceManifest& manifest, int width,
                                                int height) {
    if (manifest.frame_paths.empty()) {
        throw InputError("manifest '" + manifest.sequence_id + "' lists no frames");
    }
    for (const auto& [index, _] : manifest.keyframe_annotations) {
        if (index < 0 || index >= static_cast<int>(manifest.frame_paths.size())) {
            throw InputError("manifest '" + manifest.sequence_id + "': keyframe index " +
                             std::to_string(index) + " out of range");
        }
    }
    std::map<int, BinaryMask> cache;
    for (const auto& [index, annotations] : manifest.keyframe_annotations) {
        cache.emplace(index, rasterize(annotations, width, height));
    }
    std::vector<BinaryMask> result;
    result.reserve(manifest.frame_paths.size());
    const BinaryMask empty(width, height);
    const BinaryMask* current = &empty;
    auto next_key = cache.cbegin();
    for (std::size_t i = 0; i < manifest.frame_paths.size(); ++i) {
        while (next_key != cache.cend() && next_key->first <= static_cast<int>(i)) {
            current = &next_key->second;
            ++next_key;
        }
        result.push_back(*current);
    }
    return result;
}

/// Read and parse a manifest; annotation paths resolve relative to it.
inline SequenceManifest load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open manifest '" + path.string() + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();

    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(buffer.str());
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("manifest '" + path.string() + "': " + e.what());
    }

    SequenceManifest manifest;
    if (doc.contains("sequence_id")) {
        if (!doc["sequence_id"].is_string()) {
            throw ParseError("manifest '" + path.string() + "': sequence_id must be a string");
        }
        manifest.sequence_id = doc["sequence_id"].get<std::string>();
    } else {
        manifest.sequence_id = path.stem().string();
    }
    if (!doc.contains("has_drops") || !doc["has_drops"].is_boolean()) {
        throw ParseError("manifest '" + path.string() + "': missing boolean 'has_drops'");
    }
    manifest.has_drops = doc["has_drops"].get<bool>();
    if (!doc.contains("frames") || !doc["frames"].is_array() || doc["frames"].empty()) {
        throw ParseError("manifest '" + path.string() + "': missing non-empty 'frames' array");
    }
    const std::filesystem::path base = path.parent_path();
    for (const auto& frame : doc["frames"]) {
        if (!frame.is_string()) {
            throw ParseError("manifest '" + path.string() + "': frame entries must be strings");
        }
        std::filesystem::path p = frame.get<std::string>();
        manifest.frame_paths.push_back(p.is_absolute() ? p.string() : (base / p).string());
    }
    if (doc.contains("keyframes")) {
        if (!doc["keyframes"].is_object()) {
            throw ParseError("manifest '" + path.string() + "': 'keyframes' must be an object");
        }
        for (const auto& [key, value] : doc["keyframes"].items()) {
            int index = 0;
            try {
                index = std::stoi(key);
            } catch (const std::exception&) {
                throw ParseError("manifest '" + path.string() + "': keyframe index '" + key +
                                 "' is not an integer");
            }
            if (index < 0 || index >= static_cast<int>(manifest.frame_paths.size())) {
                throw InputError("manifest '" + path.string() + "': keyframe index " +
                                 std::to_string(index) + " out of range");
            }
            if (!value.is_string()) {
                throw ParseError("manifest '" + path.string() + "': keyframe entry for index " +
                                 key + " must be an annotation file path");
            }
            std::filesystem::path ann_path = value.get<std::string>();
            if (!ann_path.is_absolute()) ann_path = base / ann_path;
            std::ifstream ann_in(ann_path);
            if (!ann_in) {
                throw IoError("cannot open annotation '" + ann_path.string() + "'");
            }
            std::stringstream ann_buf;
            ann_buf << ann_in.rdbuf();
            manifest.keyframe_annotations[index] = parse_annotations(ann_buf.str());
        }
    }
    return manifest;
}

/// Decode every frame to grayscale, preserving order. Fails with the
/// offending path on I/O problems and with both sizes on mixed dimensions.
inline FrameSequence load_sequence(const SequenceManifest& manifest) {
    if (manifest.frame_paths.empty()) {
        throw InputError("manifest '" + manifest.sequence_id + "' lists no frames");
    }
    FrameSequence seq;
    seq.source_id = manifest.sequence_id;
    seq.frames.reserve(manifest.frame_paths.size());
    for (const auto& frame_path : manifest.frame_paths) {
        seq.frames.push_back(load_gray(frame_path));
    }
    validate_sequence(seq);
    return seq;
}

}  // namespace raindrop
