int f(int n, int x) {
    int s;
    s = 0;
    for (int i = 0; i < n; i++) {
        for (int j = 0; j < n; j++) {
            s = s + x;
        }
    }
    return s;
}
