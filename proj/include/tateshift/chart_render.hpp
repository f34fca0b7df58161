#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "tateshift/tate_engine.hpp"

namespace tss {

enum class ChartFormat { Svg, Ascii, Json };
enum class ChartView { Tate, Hfpss, Hoss };

std::string_view to_string(ChartFormat f);
std::string_view to_string(ChartView v);
ChartFormat parse_chart_format(std::string_view name);
ChartView parse_chart_view(std::string_view name);

/// Inclusive window in (t - s, s), in the plotted grading of the view.
struct ChartWindow
{
    std::int64_t x_min = -20;
    std::int64_t x_max = 20;
    std::int64_t s_min = -10;
    std::int64_t s_max = 10;

    friend bool operator==(const ChartWindow&, const ChartWindow&) = default;
};

/// Arrow colors per differential family.
struct ChartStyle
{
    std::string short_color = "gray";  // d_{2n+1}
    std::string long_color = "blue";   // d_{2n^2+1}
};

/// Inclusive bounds; a window with xmin > xmax or smin > smax is empty.
bool window_empty(const ChartWindow& w);

/// "xmin,xmax,smin,smax"
ChartWindow parse_window(std::string_view text);

inline constexpr std::int64_t kMaxChartCells = 4'000'000;

struct ChartSpec
{
    Group group = Group::Cp;
    std::int64_t p = 3;
    int page = 2;
    ChartWindow window;
    ChartFormat format = ChartFormat::Ascii;
    ChartView view = ChartView::Tate;
    ChartStyle style;
    bool overlay = false;  // mark classes that die later as struck
};

struct ChartDot
{
    std::int64_t x;
    std::int64_t s;
    std::string label;
    bool struck = false;

    friend bool operator==(const ChartDot&, const ChartDot&) = default;
};

struct ChartArrow
{
    int r;
    std::int64_t x0, s0, x1, s1;
    std::string from;
    std::string to;
    Fp coeff;

    friend bool operator==(const ChartArrow&, const ChartArrow&) = default;
};

struct Chart
{
    Group group = Group::Cp;
    std::uint32_t p = 3;
    int page = 2;
    ChartView view = ChartView::Tate;
    bool overlay = false;
    ChartWindow window;
    std::vector<ChartDot> dots;      // sorted by (s, x)
    std::vector<ChartArrow> arrows;  // d_{r'}, r' >= page, out of dots of the page

    friend bool operator==(const Chart&, const Chart&) = default;
};

/// Classes of E_page in the window and the differentials they support from
/// this page on. Throws InvalidArgument for a bad prime, page or window.
Chart build_chart(const ChartSpec& spec);
/// Marks dots whose orbit supports or receives a differential in `fates`.
/// With no fates the chart is returned unchanged.
Chart diff_overlay(Chart chart, const std::vector<ClassFate>& fates, const SpectralSequence& ss);

std::string to_ascii(const Chart& chart);
std::string to_svg(const Chart& chart, const ChartStyle& style = {});
nlohmann::ordered_json chart_json(const Chart& chart);
std::string to_json(const Chart& chart);
/// Inverse of to_json; throws InvalidArgument on malformed input.
Chart parse_chart_json(std::string_view text);

std::string render(const ChartSpec& spec);

}  // namespace tss
