int f(int n, int x) {
    for (int i = 0; i < n; i++) {
        x = x + x;
    }
    return x;
}
