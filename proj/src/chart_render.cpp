#include "tateshift/chart_render.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

#include <fmt/format.h>

#include "tateshift/errors.hpp"

namespace tss {

namespace {

std::string lowered(std::string_view s)
{
    std::string out;
    for (char c : s)
        out.push_back(char(std::tolower(static_cast<unsigned char>(c))));
    return out;
}

}  // namespace

std::string_view to_string(ChartFormat f)
{
    switch (f) {
    case ChartFormat::Svg:
        return "svg";
    case ChartFormat::Ascii:
        return "ascii";
    case ChartFormat::Json:
        return "json";
    }
    return "?";
}

std::string_view to_string(ChartView v)
{
    switch (v) {
    case ChartView::Tate:
        return "tate";
    case ChartView::Hfpss:
        return "hfpss";
    case ChartView::Hoss:
        return "hoss";
    }
    return "?";
}

ChartFormat parse_chart_format(std::string_view name)
{
    const std::string l = lowered(name);
    if (l == "svg")
        return ChartFormat::Svg;
    if (l == "ascii")
        return ChartFormat::Ascii;
    if (l == "json")
        return ChartFormat::Json;
    throw InvalidArgument(fmt::format("unknown chart format '{}' (expected svg, ascii or json)", name));
}

ChartView parse_chart_view(std::string_view name)
{
    const std::string l = lowered(name);
    if (l == "tate")
        return ChartView::Tate;
    if (l == "hfpss")
        return ChartView::Hfpss;
    if (l == "hoss")
        return ChartView::Hoss;
    throw InvalidArgument(fmt::format("unknown view '{}' (expected tate, hfpss or hoss)", name));
}

bool window_empty(const ChartWindow& w) { return w.x_min > w.x_max || w.s_min > w.s_max; }

ChartWindow parse_window(std::string_view text)
{
    std::vector<std::int64_t> v;
    std::string item;
    std::stringstream in{std::string(text)};
    while (std::getline(in, item, ',')) {
        try {
            std::size_t used = 0;
            const long long x = std::stoll(item, &used);
            if (used != item.size())
                throw std::invalid_argument(item);
            v.push_back(x);
        } catch (const std::exception&) {
            throw InvalidArgument(fmt::format("bad window component '{}'", item));
        }
    }
    if (v.size() != 4)
        throw InvalidArgument(fmt::format("window must be xmin,xmax,smin,smax (got '{}')", text));
    return {v[0], v[1], v[2], v[3]};
}

namespace {

void validate_window(const ChartWindow& w)
{
    if (window_empty(w))
        return;
    const long double cells = (long double)(w.x_max - w.x_min + 1) * (long double)(w.s_max - w.s_min + 1);
    if (cells > kMaxChartCells)
        throw InvalidArgument(fmt::format("chart window has more than {} cells", kMaxChartCells));
}

TruncatedView make_view(const SpectralSequence& ss, ChartView v)
{
    switch (v) {
    case ChartView::Hfpss:
        return hfpss_view(ss);
    case ChartView::Hoss:
        return hoss_view(ss);
    case ChartView::Tate:
        break;
    }
    return TruncatedView(ss, -kUnbounded, kUnbounded, false);
}

// Plotted cell (x, s) <-> frame bidegree.
Bidegree cell_to_bidegree(bool homological, std::int64_t x, std::int64_t s_plot)
{
    if (homological)
        return {-s_plot - 1, x + s_plot};
    return {s_plot, x + s_plot};
}

std::pair<std::int64_t, std::int64_t> bidegree_to_cell(bool homological, Bidegree d)
{
    const std::int64_t s_plot = homological ? -d.s - 1 : d.s;
    return {d.t - s_plot, s_plot};
}

}  // namespace

Chart build_chart(const ChartSpec& spec)
{
    const HeightParams params(spec.p);
    if (spec.page < 2)
        throw InvalidArgument(fmt::format("page index must be >= 2 (got {})", spec.page));
    validate_window(spec.window);

    const SpectralSequence ss = run_to_einfty(spec.group, params);
    const TruncatedView view = make_view(ss, spec.view);
    const bool hom = view.homological();

    Chart chart;
    chart.group = spec.group;
    chart.p = params.p();
    chart.page = spec.page;
    chart.view = spec.view;
    chart.overlay = spec.overlay;
    chart.window = spec.window;

    for (std::int64_t s = spec.window.s_min; s <= spec.window.s_max; ++s) {
        for (std::int64_t x = spec.window.x_min; x <= spec.window.x_max; ++x) {
            auto cls = ss.class_at(cell_to_bidegree(hom, x, s));
            if (!cls || !view.contains(*cls))
                continue;
            auto out = view.outgoing(*cls);
            auto in = view.incoming(*cls);
            if ((out && out->r < spec.page) || (in && in->r < spec.page))
                continue;
            chart.dots.push_back({x, s, ss.label(*cls), spec.overlay && (out || in)});
            if (out) {
                auto [x1, s1] = bidegree_to_cell(hom, ss.bidegree(out->target));
                chart.arrows.push_back({out->r, x, s, x1, s1, ss.label(*cls), ss.label(out->target), out->coeff});
            }
        }
    }
    return chart;
}

Chart diff_overlay(Chart chart, const std::vector<ClassFate>& fates, const SpectralSequence& ss)
{
    std::map<MonomialClass, Fate> by_orbit;
    for (const auto& f : fates)
        by_orbit[ss.lattice().reduce(f.cls)] = f.fate;
    if (fates.empty())
        return chart;
    const bool hom = chart.view == ChartView::Hoss;
    chart.overlay = true;
    for (auto& d : chart.dots) {
        auto cls = ss.class_at(cell_to_bidegree(hom, d.x, d.s));
        if (!cls)
            throw InvalidArgument(fmt::format("no class at chart cell ({},{})", d.x, d.s));
        auto it = by_orbit.find(ss.lattice().reduce(*cls));
        d.struck = it != by_orbit.end() && it->second != Fate::Survives;
    }
    return chart;
}

std::string to_ascii(const Chart& c)
{
    const ChartWindow& w = c.window;
    std::map<std::pair<std::int64_t, std::int64_t>, char> cells;
    for (const auto& d : c.dots) {
        char& ch = cells[{d.s, d.x}];
        ch = ch ? '#' : (d.struck ? 'x' : 'o');
    }

    std::string out = fmt::format("chart group={} p={} page=E_{} view={}\n", to_string(c.group), c.p, c.page,
                                  to_string(c.view));
    out += fmt::format("window x=t-s in [{},{}], s in [{},{}]\n", w.x_min, w.x_max, w.s_min, w.s_max);
    out += "legend: o class, x class that dies later, # several classes, . empty\n";
    for (std::int64_t s = w.s_max; s >= w.s_min; --s) {
        out += fmt::format("{:>5} |", s);
        for (std::int64_t x = w.x_min; x <= w.x_max; ++x) {
            auto it = cells.find({s, x});
            out += it == cells.end() ? '.' : it->second;
        }
        out += '\n';
    }
    const std::size_t width = w.x_max >= w.x_min ? std::size_t(w.x_max - w.x_min + 1) : 0;
    out += "      +" + std::string(width, '-') + '\n';
    std::string ticks(width, ' ');
    for (std::int64_t x = w.x_min; x <= w.x_max; ++x)
        if (x % 10 == 0)
            ticks[std::size_t(x - w.x_min)] = '|';
    out += "       " + ticks + '\n';
    out += fmt::format("       ticks at x = 0 mod 10, first column x = {}\n", w.x_min);
    out += fmt::format("differentials: {}\n", c.arrows.size());
    for (const auto& a : c.arrows)
        out += fmt::format("  d_{} ({},{}) {} -> ({},{}) {} coeff {}\n", a.r, a.x0, a.s0, a.from, a.x1, a.s1, a.to,
                           a.coeff);
    return out;
}

std::string to_svg(const Chart& c, const ChartStyle& style)
{
    constexpr std::int64_t u = 12;
    const ChartWindow& w = c.window;
    const std::int64_t width = std::max<std::int64_t>(w.x_max - w.x_min + 2, 1) * u;
    const std::int64_t height = std::max<std::int64_t>(w.s_max - w.s_min + 2, 1) * u;
    const char* dot = "black";
    const int short_r = short_differential_length(HeightParams(c.p));
    auto px = [&](std::int64_t x) { return (x - w.x_min + 1) * u; };
    auto py = [&](std::int64_t s) { return (w.s_max - s + 1) * u; };

    std::string out = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n", width,
        height, width, height);
    out += fmt::format("<title>group {} p {} E_{} {}</title>\n", to_string(c.group), c.p, c.page, to_string(c.view));
    out += "<defs>";
    for (const auto& [id, color] : {std::pair{"short", style.short_color}, std::pair{"long", style.long_color}})
        out += fmt::format("<marker id=\"head-{}\" markerWidth=\"6\" markerHeight=\"6\" refX=\"5\" refY=\"3\" "
                           "orient=\"auto\"><path d=\"M0,0 L6,3 L0,6 z\" fill=\"{}\"/></marker>",
                           id, color);
    out += "</defs>\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (w.x_min <= 0 && 0 <= w.x_max)
        out += fmt::format("<line x1=\"{0}\" y1=\"0\" x2=\"{0}\" y2=\"{1}\" stroke=\"#dddddd\"/>\n", px(0), height);
    if (w.s_min <= 0 && 0 <= w.s_max)
        out += fmt::format("<line x1=\"0\" y1=\"{0}\" x2=\"{1}\" y2=\"{0}\" stroke=\"#dddddd\"/>\n", py(0), width);
    for (const auto& a : c.arrows) {
        const bool is_short = a.r == short_r;
        out += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" marker-end=\"url(#head-{})\">"
                           "<title>d_{} {} -&gt; {}</title></line>\n",
                           px(a.x0), py(a.s0), px(a.x1), py(a.s1), is_short ? style.short_color : style.long_color,
                           is_short ? "short" : "long", a.r, a.from, a.to);
    }
    for (const auto& d : c.dots) {
        out += fmt::format("<circle cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"{}\"><title>{}</title></circle>\n", px(d.x),
                           py(d.s), dot, d.label);
        if (d.struck)
            out += fmt::format("<path d=\"M{} {} l8 -8\" stroke=\"{}\"/>\n", px(d.x) - 4, py(d.s) + 4, dot);
    }
    out += "</svg>\n";
    return out;
}

nlohmann::ordered_json chart_json(const Chart& c)
{
    nlohmann::ordered_json j;
    j["group"] = std::string(to_string(c.group));
    j["p"] = c.p;
    j["page"] = c.page;
    j["view"] = std::string(to_string(c.view));
    j["overlay"] = c.overlay;
    j["window"] = {{"x_min", c.window.x_min}, {"x_max", c.window.x_max}, {"s_min", c.window.s_min},
                   {"s_max", c.window.s_max}};
    auto dots = nlohmann::ordered_json::array();
    for (const auto& d : c.dots)
        dots.push_back({{"x", d.x}, {"s", d.s}, {"label", d.label}, {"struck", d.struck}});
    j["dots"] = dots;
    auto arrows = nlohmann::ordered_json::array();
    for (const auto& a : c.arrows)
        arrows.push_back({{"r", a.r},
                          {"from", {{"x", a.x0}, {"s", a.s0}, {"label", a.from}}},
                          {"to", {{"x", a.x1}, {"s", a.s1}, {"label", a.to}}},
                          {"coeff", a.coeff}});
    j["arrows"] = arrows;
    return j;
}

std::string to_json(const Chart& c) { return chart_json(c).dump(2) + "\n"; }

Chart parse_chart_json(std::string_view text)
{
    try {
        const auto j = nlohmann::ordered_json::parse(text);
        Chart c;
        c.group = parse_group(j.at("group").get<std::string>());
        c.p = j.at("p").get<std::uint32_t>();
        c.page = j.at("page").get<int>();
        c.view = parse_chart_view(j.at("view").get<std::string>());
        c.overlay = j.at("overlay").get<bool>();
        const auto& w = j.at("window");
        c.window = {w.at("x_min").get<std::int64_t>(), w.at("x_max").get<std::int64_t>(),
                    w.at("s_min").get<std::int64_t>(), w.at("s_max").get<std::int64_t>()};
        for (const auto& d : j.at("dots"))
            c.dots.push_back({d.at("x").get<std::int64_t>(), d.at("s").get<std::int64_t>(),
                              d.at("label").get<std::string>(), d.at("struck").get<bool>()});
        for (const auto& a : j.at("arrows")) {
            const auto& f = a.at("from");
            const auto& t = a.at("to");
            c.arrows.push_back({a.at("r").get<int>(), f.at("x").get<std::int64_t>(), f.at("s").get<std::int64_t>(),
                                t.at("x").get<std::int64_t>(), t.at("s").get<std::int64_t>(),
                                f.at("label").get<std::string>(), t.at("label").get<std::string>(),
                                a.at("coeff").get<Fp>()});
        }
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(fmt::format("malformed chart json: {}", e.what()));
    }
}

std::string render(const ChartSpec& spec)
{
    const Chart c = build_chart(spec);
    switch (spec.format) {
    case ChartFormat::Svg:
        return to_svg(c, spec.style);
    case ChartFormat::Json:
        return to_json(c);
    case ChartFormat::Ascii:
        break;
    }
    return to_ascii(c);
}

}  // namespace tss
