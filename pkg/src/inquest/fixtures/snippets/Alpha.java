// Small counter with a clamped accessor.
public class Alpha {

    private int count;
    private int limit;

    void reset() {
        count = 0;
    }

    /* Clamp v into [0, limit].
       Negative limits behave as zero. */
    int clamp(int v) {
        int lim = limit;
        if (lim < 0) {
            lim = 0;
        }
        int r = v > lim ? lim : v;
        log("clamp");
        return r;
    }
}
