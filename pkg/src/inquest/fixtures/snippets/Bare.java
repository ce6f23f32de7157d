// Marker interface; no bodies, nothing to measure.
public interface Bare {
    int size();
    boolean empty();
}
