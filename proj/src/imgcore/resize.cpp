#include "lanelab/imgcore.hpp"

#include <algorithm>
#include <cmath>

namespace lanelab::imgcore {

RgbImage resize_bilinear(const RgbImage& img, int width, int height) {
    if (img.same_size(width, height)) return img;
    RgbImage out(width, height);
    const double sx = static_cast<double>(img.width()) / width;
    const double sy = static_cast<double>(img.height()) / height;
    for (int y = 0; y < height; ++y) {
        const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, img.height() - 1.0);
        const int y0 = static_cast<int>(fy);
        const int y1 = std::min(y0 + 1, img.height() - 1);
        const double ay = fy - y0;
        for (int x = 0; x < width; ++x) {
            const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, img.width() - 1.0);
            const int x0 = static_cast<int>(fx);
            const int x1 = std::min(x0 + 1, img.width() - 1);
            const double ax = fx - x0;
            auto mix = [&](auto channel) {
                const double top = (1 - ax) * channel(img.at(x0, y0)) + ax * channel(img.at(x1, y0));
                const double bot = (1 - ax) * channel(img.at(x0, y1)) + ax * channel(img.at(x1, y1));
                return static_cast<std::uint8_t>(std::clamp(round_half_up((1 - ay) * top + ay * bot), 0.0, 255.0));
            };
            out.at(x, y) = {mix([](Rgb p) { return p.r; }), mix([](Rgb p) { return p.g; }),
                            mix([](Rgb p) { return p.b; })};
        }
    }
    return out;
}

} // namespace lanelab::imgcore
